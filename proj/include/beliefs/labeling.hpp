#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace beliefs {

/// Ordered list of lowercase keyword stems that mark a bug-fixing commit.
class KeywordSet {
public:
    /// Throws ConfigError if a stem is empty, has uppercase letters or whitespace.
    explicit KeywordSet(std::vector<std::string> stems);

    /// The 29 default stems.
    static KeywordSet defaults();

    const std::vector<std::string>& stems() const { return stems_; }

    /// Appends stems not already present.
    void extend(const std::vector<std::string>& more);

private:
    std::vector<std::string> stems_;
};

struct Classification {
    bool is_bug_fix = false;
    /// Matching stems, in keyword-set order, without duplicates.
    std::vector<std::string> matched;
};

/// Splits the lowercased message on non-alphanumeric characters and reports
/// every stem that is a prefix of some token. Bytes >= 0x80 are kept inside
/// tokens so multi-byte UTF-8 words are not split apart.
Classification classify_message(std::string_view message, const KeywordSet& keywords);

/// Reads one stem per line; blank lines and '#' comments are skipped.
/// With extend=false the file replaces the defaults, otherwise it is appended.
KeywordSet load_keyword_file(const std::filesystem::path& path, bool extend);

}  // namespace beliefs
