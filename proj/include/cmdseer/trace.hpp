#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace cmdseer::trace {

// Normalized trace line format: "<TAG> <payload>" with single-letter tags
//   S  session start          D  working directory
//   C  command line as typed  A  alias definition, payload "name=expansion"
//   E  error mark for the immediately preceding command
// Lines with any other shape are kept verbatim as Other records.
enum class Tag { SessionStart, Command, Directory, AliasDef, ErrorMark, Other };

const char* tag_name(Tag t);

struct RawRecord {
    Tag tag;
    std::string payload;
    std::size_t line_no = 0;  // 1-based input line

    bool operator==(const RawRecord&) const = default;
};

struct UserTrace {
    std::string user_id;
    std::vector<RawRecord> records;
    // Final state of all alias definitions in file order (later wins).
    std::map<std::string, std::string> aliases;
    std::size_t unrecognized = 0;  // lines kept as Other

    bool operator==(const UserTrace&) const = default;
};

// Every input line maps to exactly one record; malformed lines (empty
// command payload, bad alias split, unknown tag letter) become Other and
// bump `unrecognized`. Throws on stream read failure, naming the line.
UserTrace parse_trace(std::istream& in, std::string user_id);
UserTrace parse_trace_file(const std::filesystem::path& file);

// Inverse of parse_trace for well-formed traces: one line per record.
std::string serialize_trace(const UserTrace& t);

struct LoadReport {
    std::vector<UserTrace> traces;          // lexicographic by filename
    std::vector<std::string> failures;      // "file: reason", non-fatal
};

// Loads every regular file in `dir` whose filename matches `filter`
// (glob with '*' and '?'; "*" selects all). Throws if nothing matches.
LoadReport load_user_group(const std::filesystem::path& dir, const std::string& filter = "*");

bool glob_match(std::string_view pattern, std::string_view name);

// --- Greenberg trace adapter ----------------------------------------------
//
// Best-effort translation of Saul Greenberg's collected-traces markup into
// the normalized format above. Assumptions, per original tag letter:
//   S <...>   session start, kept as S
//   C <line>  command line as typed, kept as C
//   D <dir>   working directory, kept as D
//   A <line>  the alias-expanded form the shell actually ran; folded into
//             the preceding C record by replacing its payload (so alias
//             replacement happens at ingest time for this corpus)
//   X <...>   csh error annotation for the preceding command, mapped to E
//   E <...>   session end, dropped (the normalized format has no such tag)
// Anything else is passed through verbatim and will surface as Other.
struct GreenbergOptions {
    char error_tag = 'X';
    char session_end_tag = 'E';
    bool fold_alias_lines = true;
};

std::string greenberg_to_normalized(std::istream& in, const GreenbergOptions& opt = {});

}  // namespace cmdseer::trace
