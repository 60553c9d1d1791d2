#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testutil {

// max relative error between analytic and numeric gradients; components that
// are both ~0 contribute nothing
inline double max_rel_error(const std::vector<double>& analytic,
                            const std::vector<double>& numeric) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        double a = analytic[i], n = numeric[i];
        double denom = std::max(std::abs(a), std::abs(n));
        if (denom < 1e-10) continue;
        worst = std::max(worst, std::abs(a - n) / denom);
    }
    return worst;
}

// central finite differences of f over a parameter vector accessed via
// get/set callbacks
inline std::vector<double> central_differences(std::size_t n,
                                               const std::function<double(std::size_t)>& get,
                                               const std::function<void(std::size_t, double)>& set,
                                               const std::function<double()>& f,
                                               double eps = 1e-5) {
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
        double orig = get(i);
        set(i, orig + eps);
        double hi = f();
        set(i, orig - eps);
        double lo = f();
        set(i, orig);
        grad[i] = (hi - lo) / (2.0 * eps);
    }
    return grad;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        path_ = base / (tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    f << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace testutil
