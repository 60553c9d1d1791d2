#include "cmdseer/porter.hpp"

#include <array>
#include <cstddef>

namespace cmdseer::kb {
namespace {

bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// A working buffer over the word. Rule conditions (measure, *v*, *d, *o)
// are always evaluated on the stem, i.e. the prefix [0, len).
class Stem {
public:
    explicit Stem(std::string_view w) : word_(w) {}

    std::size_t size() const { return word_.size(); }
    std::string str() const { return word_; }

    bool is_consonant(std::size_t i) const {
        char c = word_[i];
        if (is_vowel_letter(c)) return false;
        if (c == 'y') return i == 0 || !is_consonant(i - 1);
        return true;
    }

    // m = number of VC sequences in [0, len)
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && is_consonant(i)) ++i;
        while (i < len) {
            while (i < len && !is_consonant(i)) ++i;
            if (i == len) break;
            ++m;
            while (i < len && is_consonant(i)) ++i;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i)
            if (!is_consonant(i)) return true;
        return false;
    }

    bool ends_double_consonant(std::size_t len) const {
        if (len < 2) return false;
        return word_[len - 1] == word_[len - 2] && is_consonant(len - 1);
    }

    // *o: stem ends cvc, the second c not being w, x or y
    bool ends_cvc(std::size_t len) const {
        if (len < 3) return false;
        if (!is_consonant(len - 3) || is_consonant(len - 2) || !is_consonant(len - 1))
            return false;
        char c = word_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends_with(std::string_view suffix) const {
        if (suffix.size() > word_.size()) return false;
        return word_.compare(word_.size() - suffix.size(), suffix.size(), suffix) == 0;
    }

    std::size_t stem_len(std::string_view suffix) const { return word_.size() - suffix.size(); }

    void replace_suffix(std::string_view suffix, std::string_view repl) {
        word_.erase(word_.size() - suffix.size());
        word_.append(repl);
    }

    void truncate(std::size_t len) { word_.erase(len); }

    char last() const { return word_.back(); }

private:
    std::string word_;
};

void step1a(Stem& s) {
    if (s.ends_with("sses")) s.replace_suffix("sses", "ss");
    else if (s.ends_with("ies")) s.replace_suffix("ies", "i");
    else if (s.ends_with("ss")) {}
    else if (s.ends_with("s")) s.replace_suffix("s", "");
}

void step1b(Stem& s) {
    if (s.ends_with("eed")) {
        if (s.measure(s.stem_len("eed")) > 0) s.replace_suffix("eed", "ee");
        return;
    }
    bool stripped = false;
    if (s.ends_with("ed") && s.has_vowel(s.stem_len("ed"))) {
        s.replace_suffix("ed", "");
        stripped = true;
    } else if (s.ends_with("ing") && s.has_vowel(s.stem_len("ing"))) {
        s.replace_suffix("ing", "");
        stripped = true;
    }
    if (!stripped) return;

    if (s.ends_with("at")) s.replace_suffix("at", "ate");
    else if (s.ends_with("bl")) s.replace_suffix("bl", "ble");
    else if (s.ends_with("iz")) s.replace_suffix("iz", "ize");
    else if (s.ends_double_consonant(s.size())) {
        char c = s.last();
        if (c != 'l' && c != 's' && c != 'z') s.truncate(s.size() - 1);
    } else if (s.measure(s.size()) == 1 && s.ends_cvc(s.size())) {
        s.replace_suffix("", "e");
    }
}

void step1c(Stem& s) {
    if (s.ends_with("y") && s.has_vowel(s.stem_len("y"))) s.replace_suffix("y", "i");
}

struct Rule {
    std::string_view suffix;
    std::string_view repl;
};

// Longest matching suffix wins; its condition is then tested once.
bool apply_rules(Stem& s, const Rule* rules, std::size_t n, int min_measure) {
    const Rule* best = nullptr;
    for (std::size_t i = 0; i < n; ++i) {
        if (s.ends_with(rules[i].suffix) &&
            (!best || rules[i].suffix.size() > best->suffix.size()))
            best = &rules[i];
    }
    if (!best) return false;
    if (s.measure(s.stem_len(best->suffix)) > min_measure - 1) {
        s.replace_suffix(best->suffix, best->repl);
        return true;
    }
    return false;
}

constexpr std::array<Rule, 20> kStep2 = {{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
    {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
    {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
    {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3 = {{
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ful", ""},   {"ness", ""},
}};

constexpr std::array<Rule, 18> kStep4 = {{
    {"al", ""},   {"ance", ""}, {"ence", ""},  {"er", ""},   {"ic", ""},
    {"able", ""}, {"ible", ""}, {"ant", ""},   {"ement", ""}, {"ment", ""},
    {"ent", ""},  {"ou", ""},   {"ism", ""},   {"ate", ""},  {"iti", ""},
    {"ous", ""},  {"ive", ""},  {"ize", ""},
}};

void step4(Stem& s) {
    // "ion" carries the extra (*S or *T) condition, handled with the
    // longest-match scan so that e.g. "ion" does not shadow "ation".
    const Rule* best = nullptr;
    bool best_is_ion = false;
    for (const Rule& r : kStep4) {
        if (s.ends_with(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) {
            best = &r;
            best_is_ion = false;
        }
    }
    if (s.ends_with("ion") && (!best || 3 > best->suffix.size())) {
        static constexpr Rule ion{"ion", ""};
        best = &ion;
        best_is_ion = true;
    }
    if (!best) return;
    std::size_t len = s.stem_len(best->suffix);
    if (s.measure(len) <= 1) return;
    if (best_is_ion) {
        char c = len > 0 ? s.str()[len - 1] : '\0';
        if (c != 's' && c != 't') return;
    }
    s.replace_suffix(best->suffix, best->repl);
}

void step5a(Stem& s) {
    if (!s.ends_with("e")) return;
    std::size_t len = s.stem_len("e");
    int m = s.measure(len);
    if (m > 1 || (m == 1 && !s.ends_cvc(len))) s.truncate(len);
}

void step5b(Stem& s) {
    if (s.measure(s.size()) > 1 && s.ends_double_consonant(s.size()) && s.last() == 'l')
        s.truncate(s.size() - 1);
}

}  // namespace

std::string porter_stem(std::string_view word) {
    if (word.size() <= 2) return std::string(word);
    Stem s(word);
    step1a(s);
    step1b(s);
    step1c(s);
    apply_rules(s, kStep2.data(), kStep2.size(), 1);
    apply_rules(s, kStep3.data(), kStep3.size(), 1);
    step4(s);
    step5a(s);
    step5b(s);
    return s.str();
}

}  // namespace cmdseer::kb
