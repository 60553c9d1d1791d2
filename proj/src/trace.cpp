#include "cmdseer/trace.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cmdseer::trace {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_alias_payload(std::string_view payload, std::string* name, std::string* expansion) {
    auto eq = payload.find('=');
    if (eq == std::string_view::npos) return false;
    std::string_view n = trim(payload.substr(0, eq));
    std::string_view e = payload.substr(eq + 1);
    if (n.empty() || trim(e).empty()) return false;
    if (n.find_first_of(" \t") != std::string_view::npos) return false;
    if (name) *name = std::string(n);
    if (expansion) *expansion = std::string(trim(e));
    return true;
}

Tag tag_for_letter(char c) {
    switch (c) {
        case 'S': return Tag::SessionStart;
        case 'C': return Tag::Command;
        case 'D': return Tag::Directory;
        case 'A': return Tag::AliasDef;
        case 'E': return Tag::ErrorMark;
        default: return Tag::Other;
    }
}

char letter_for_tag(Tag t) {
    switch (t) {
        case Tag::SessionStart: return 'S';
        case Tag::Command: return 'C';
        case Tag::Directory: return 'D';
        case Tag::AliasDef: return 'A';
        case Tag::ErrorMark: return 'E';
        default: return '?';
    }
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

const char* tag_name(Tag t) {
    switch (t) {
        case Tag::SessionStart: return "SessionStart";
        case Tag::Command: return "Command";
        case Tag::Directory: return "Directory";
        case Tag::AliasDef: return "AliasDef";
        case Tag::ErrorMark: return "ErrorMark";
        default: return "Other";
    }
}

UserTrace parse_trace(std::istream& in, std::string user_id) {
    UserTrace t;
    t.user_id = std::move(user_id);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);

        RawRecord rec;
        rec.line_no = line_no;
        rec.tag = Tag::Other;
        rec.payload = line;

        if (!line.empty() && (line.size() == 1 || line[1] == ' ')) {
            Tag tag = tag_for_letter(line[0]);
            if (tag != Tag::Other) {
                std::string payload = line.size() > 1 ? line.substr(2) : std::string();
                bool ok = true;
                if (tag == Tag::Command && trim(payload).empty()) ok = false;
                std::string name, expansion;
                if (tag == Tag::AliasDef && !valid_alias_payload(payload, &name, &expansion))
                    ok = false;
                if (ok) {
                    rec.tag = tag;
                    rec.payload = std::move(payload);
                    if (tag == Tag::AliasDef) t.aliases[name] = expansion;
                }
            }
        }
        if (rec.tag == Tag::Other) ++t.unrecognized;
        t.records.push_back(std::move(rec));
    }
    if (in.bad())
        throw std::runtime_error("trace '" + t.user_id + "': read failure at line " +
                                 std::to_string(line_no + 1));
    return t;
}

UserTrace parse_trace_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw std::runtime_error("cannot open trace file: " + file.string());
    return parse_trace(in, file.stem().string());
}

std::string serialize_trace(const UserTrace& t) {
    std::string out;
    for (const RawRecord& r : t.records) {
        if (r.tag == Tag::Other) {
            out += r.payload;
        } else {
            out += letter_for_tag(r.tag);
            if (!r.payload.empty()) {
                out += ' ';
                out += r.payload;
            }
        }
        out += '\n';
    }
    return out;
}

bool glob_match(std::string_view pattern, std::string_view name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

LoadReport load_user_group(const std::filesystem::path& dir, const std::string& filter) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("trace directory does not exist: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (glob_match(filter, entry.path().filename().string()))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw std::runtime_error("empty corpus: no trace files in " + dir.string() +
                                 " match '" + filter + "'");

    LoadReport report;
    for (const auto& f : files) {
        try {
            report.traces.push_back(parse_trace_file(f));
        } catch (const std::exception& e) {
            report.failures.push_back(f.filename().string() + ": " + e.what());
        }
    }
    return report;
}

std::string greenberg_to_normalized(std::istream& in, const GreenbergOptions& opt) {
    std::ostringstream out;
    std::string line;
    bool have_pending_command = false;
    std::string pending_command;

    auto flush_pending = [&] {
        if (have_pending_command) {
            out << "C " << pending_command << '\n';
            have_pending_command = false;
        }
    };

    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        char tag = line[0];
        bool has_space = line.size() > 1 && line[1] == ' ';
        std::string payload = line.size() > 2 ? line.substr(2) : std::string();

        if (tag == 'C' && has_space) {
            flush_pending();
            pending_command = payload;
            have_pending_command = true;
        } else if (tag == 'A' && has_space && opt.fold_alias_lines && have_pending_command) {
            // the expanded line the shell ran replaces the typed one
            pending_command = payload;
        } else if (tag == opt.error_tag) {
            flush_pending();
            out << "E\n";
        } else if (tag == opt.session_end_tag) {
            flush_pending();
        } else if (tag == 'S' && (has_space || line.size() == 1)) {
            flush_pending();
            out << 'S';
            if (!payload.empty()) out << ' ' << payload;
            out << '\n';
        } else if (tag == 'D' && has_space) {
            flush_pending();
            out << "D " << payload << '\n';
        } else {
            flush_pending();
            out << line << '\n';
        }
    }
    flush_pending();
    return out.str();
}

}  // namespace cmdseer::trace
