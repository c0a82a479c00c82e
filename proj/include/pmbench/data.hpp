#pragma once

// CNC dataset ingestion: CSV parsing with schema validation by normalized
// header name, deterministic-failure target construction, stratified
// train/test splitting, and the raw feature encoding shared by the
// correlation pipelines.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pmbench/errors.hpp"
#include "pmbench/rng.hpp"

namespace pmbench {

enum class MachineType : std::uint8_t { L = 0, M = 1, H = 2 };

inline char machine_type_char(MachineType t) {
    switch (t) {
        case MachineType::L: return 'L';
        case MachineType::M: return 'M';
        default: return 'H';
    }
}

struct MachineRecord {
    std::int64_t udi = 0;
    std::string product_id;
    MachineType machine_type = MachineType::L;
    double air_temp = 0.0;      // kelvin
    double process_temp = 0.0;  // kelvin
    double rot_speed = 0.0;     // rpm
    double torque = 0.0;        // newton-meters
    double tool_wear = 0.0;     // minutes
    bool machine_failure = false;
    bool twf = false;
    bool hdf = false;
    bool pwf = false;
    bool osf = false;
    bool rnf = false;

    bool operator==(const MachineRecord&) const = default;
};

struct LabeledRecord {
    MachineRecord record;
    bool label = false;  // twf | hdf | pwf | osf; rnf rows never get here

    bool operator==(const LabeledRecord&) const = default;
};

struct SplitSpec {
    double test_fraction = 0.20;
    std::uint64_t seed = 42;
};

struct DataSplit {
    std::vector<LabeledRecord> train;
    std::vector<LabeledRecord> test;
};

namespace detail {

// Column identities, in canonical file order.
enum Column : int {
    kUdi = 0, kProductId, kType, kAirTemp, kProcessTemp, kRotSpeed,
    kTorque, kToolWear, kMachineFailure, kTwf, kHdf, kPwf, kOsf, kRnf,
    kColumnCount
};

inline const std::array<const char*, kColumnCount>& canonical_names() {
    static const std::array<const char*, kColumnCount> names = {
        "UDI", "Product ID", "Type", "Air temperature", "Process temperature",
        "Rotational speed", "Torque", "Tool wear", "Machine failure",
        "TWF", "HDF", "PWF", "OSF", "RNF"};
    return names;
}

// Lowercase, strip bracketed unit suffixes, drop periods/underscores,
// collapse whitespace. "Air temperature [K]" and "Air temp" both survive.
inline std::string normalize_header(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    int bracket_depth = 0;
    for (char ch : raw) {
        if (ch == '[' || ch == '(') { ++bracket_depth; continue; }
        if (ch == ']' || ch == ')') { if (bracket_depth > 0) --bracket_depth; continue; }
        if (bracket_depth > 0) continue;
        if (ch == '.') continue;
        if (ch == '_' || ch == '\t') ch = ' ';
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    // collapse runs of spaces and trim
    std::string collapsed;
    collapsed.reserve(out.size());
    bool prev_space = true;
    for (char ch : out) {
        if (ch == ' ') {
            if (!prev_space) collapsed.push_back(' ');
            prev_space = true;
        } else {
            collapsed.push_back(ch);
            prev_space = false;
        }
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    return collapsed;
}

inline std::optional<Column> match_column(const std::string& normalized) {
    static const std::map<std::string, Column> aliases = {
        {"udi", kUdi},
        {"product id", kProductId},
        {"type", kType},
        {"machine type", kType},
        {"air temperature", kAirTemp},
        {"air temp", kAirTemp},
        {"process temperature", kProcessTemp},
        {"process temp", kProcessTemp},
        {"rotational speed", kRotSpeed},
        {"rot speed", kRotSpeed},
        {"torque", kTorque},
        {"tool wear", kToolWear},
        {"machine failure", kMachineFailure},
        {"twf", kTwf},
        {"hdf", kHdf},
        {"pwf", kPwf},
        {"osf", kOsf},
        {"rnf", kRnf},
    };
    auto it = aliases.find(normalized);
    if (it == aliases.end()) return std::nullopt;
    return it->second;
}

// Minimal CSV field splitter: double quotes with "" escapes, no embedded
// newlines (the dataset has none).
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cur.push_back('"'); ++i; }
                else quoted = false;
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_double_field(const std::string& field, const char* column, int row) {
    const std::string t = trim(field);
    double value = 0.0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw ParseError("row " + std::to_string(row) + ": non-numeric value \"" + t +
                         "\" in column " + column);
    }
    return value;
}

inline std::int64_t parse_int_field(const std::string& field, const char* column, int row) {
    const std::string t = trim(field);
    std::int64_t value = 0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw ParseError("row " + std::to_string(row) + ": non-integer value \"" + t +
                         "\" in column " + column);
    }
    return value;
}

inline bool parse_flag_field(const std::string& field, const char* column, int row) {
    const std::string t = trim(field);
    if (t == "0") return false;
    if (t == "1") return true;
    throw ParseError("row " + std::to_string(row) + ": flag column " + column +
                     " must be 0 or 1, got \"" + t + "\"");
}

// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace detail

// Parses the 14-column CNC dataset. Columns are located by normalized
// header name, so both the bracketed-unit headers of the public CSV and
// abbreviated variants work, in any order.
inline std::vector<MachineRecord> parse_dataset(std::string_view csv_text) {
    using namespace detail;

    // strip UTF-8 BOM
    if (csv_text.size() >= 3 && csv_text.substr(0, 3) == "\xEF\xBB\xBF") {
        csv_text.remove_prefix(3);
    }

    std::vector<std::string_view> lines;
    {
        std::size_t pos = 0;
        while (pos <= csv_text.size()) {
            std::size_t nl = csv_text.find('\n', pos);
            std::string_view line = (nl == std::string_view::npos)
                                        ? csv_text.substr(pos)
                                        : csv_text.substr(pos, nl - pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }

    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw SchemaError("no header row: file is empty");

    // Resolve the header into a column permutation.
    const std::vector<std::string> header = split_csv_line(lines[first]);
    std::array<int, kColumnCount> position;
    position.fill(-1);
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string norm = normalize_header(header[i]);
        const auto col = match_column(norm);
        if (!col) {
            throw SchemaError("unexpected column \"" + trim(header[i]) + "\"");
        }
        if (position[*col] != -1) {
            throw SchemaError(std::string("duplicate column \"") + canonical_names()[*col] + "\"");
        }
        position[*col] = static_cast<int>(i);
    }
    for (int c = 0; c < kColumnCount; ++c) {
        if (position[c] == -1) {
            throw SchemaError(std::string("missing column \"") + canonical_names()[c] + "\"");
        }
    }

    std::vector<MachineRecord> records;
    int row = 0;
    for (std::size_t li = first + 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        ++row;
        const std::vector<std::string> fields = split_csv_line(lines[li]);
        if (fields.size() != kColumnCount) {
            throw SchemaError("row " + std::to_string(row) + ": expected " +
                              std::to_string(int(kColumnCount)) + " columns, got " +
                              std::to_string(fields.size()));
        }
        auto field = [&](Column c) -> const std::string& { return fields[position[c]]; };

        MachineRecord r;
        r.udi = parse_int_field(field(kUdi), "UDI", row);
        if (r.udi <= 0) {
            throw DomainError("row " + std::to_string(row) + ": UDI must be positive, got " +
                              std::to_string(r.udi));
        }
        r.product_id = trim(field(kProductId));

        const std::string type = trim(field(kType));
        if (type == "L") r.machine_type = MachineType::L;
        else if (type == "M") r.machine_type = MachineType::M;
        else if (type == "H") r.machine_type = MachineType::H;
        else {
            throw DomainError("row " + std::to_string(row) + ": unknown machine type \"" +
                              type + "\" (expected L, M or H)");
        }

        r.air_temp = parse_double_field(field(kAirTemp), "Air temperature", row);
        r.process_temp = parse_double_field(field(kProcessTemp), "Process temperature", row);
        r.rot_speed = parse_double_field(field(kRotSpeed), "Rotational speed", row);
        r.torque = parse_double_field(field(kTorque), "Torque", row);
        r.tool_wear = parse_double_field(field(kToolWear), "Tool wear", row);
        if (r.air_temp <= 0.0 || r.process_temp <= 0.0) {
            throw DomainError("row " + std::to_string(row) +
                              ": temperatures must be positive kelvin");
        }
        if (r.rot_speed <= 0.0) {
            throw DomainError("row " + std::to_string(row) + ": rotational speed must be positive");
        }
        if (r.torque < 0.0 || r.tool_wear < 0.0) {
            throw DomainError("row " + std::to_string(row) +
                              ": torque and tool wear must be non-negative");
        }

        r.machine_failure = parse_flag_field(field(kMachineFailure), "Machine failure", row);
        r.twf = parse_flag_field(field(kTwf), "TWF", row);
        r.hdf = parse_flag_field(field(kHdf), "HDF", row);
        r.pwf = parse_flag_field(field(kPwf), "PWF", row);
        r.osf = parse_flag_field(field(kOsf), "OSF", row);
        r.rnf = parse_flag_field(field(kRnf), "RNF", row);
        records.push_back(std::move(r));
    }
    return records;
}

inline std::string serialize_record(const MachineRecord& r) {
    using detail::format_double;
    std::string out;
    out += std::to_string(r.udi);
    out += ',';
    out += r.product_id;
    out += ',';
    out += machine_type_char(r.machine_type);
    out += ',';
    out += format_double(r.air_temp);
    out += ',';
    out += format_double(r.process_temp);
    out += ',';
    out += format_double(r.rot_speed);
    out += ',';
    out += format_double(r.torque);
    out += ',';
    out += format_double(r.tool_wear);
    for (bool flag : {r.machine_failure, r.twf, r.hdf, r.pwf, r.osf, r.rnf}) {
        out += flag ? ",1" : ",0";
    }
    return out;
}

inline std::string dataset_header() {
    return "UDI,Product ID,Type,Air temperature [K],Process temperature [K],"
           "Rotational speed [rpm],Torque [Nm],Tool wear [min],Machine failure,"
           "TWF,HDF,PWF,OSF,RNF";
}

inline std::string serialize_dataset(const std::vector<MachineRecord>& records) {
    std::string out = dataset_header();
    out += '\n';
    for (const auto& r : records) {
        out += serialize_record(r);
        out += '\n';
    }
    return out;
}

// Drops RNF-flagged rows, labels the rest with the deterministic-failure
// target. Order preserved.
inline std::vector<LabeledRecord> build_labeled(const std::vector<MachineRecord>& records) {
    std::vector<LabeledRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (r.rnf) continue;
        out.push_back({r, r.twf || r.hdf || r.pwf || r.osf});
    }
    return out;
}

inline double prevalence(const std::vector<LabeledRecord>& records) {
    if (records.empty()) return 0.0;
    std::size_t pos = 0;
    for (const auto& r : records) pos += r.label ? 1 : 0;
    return static_cast<double>(pos) / static_cast<double>(records.size());
}

// Stratified split: positives and negatives are shuffled and cut
// independently, so both sides keep the class distribution. Per-class test
// counts use round-half-away-from-zero. Output is sorted by UDI, which
// makes the result a pure function of (records, spec).
inline DataSplit stratified_split(const std::vector<LabeledRecord>& records,
                                  const SplitSpec& spec) {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
        throw SplitError("test_fraction must lie in (0,1)");
    }
    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < records.size(); ++i) {
        (records[i].label ? pos_idx : neg_idx).push_back(i);
    }
    if (pos_idx.size() < 2 || neg_idx.size() < 2) {
        throw SplitError("each class needs at least 2 records (got " +
                         std::to_string(pos_idx.size()) + " positive, " +
                         std::to_string(neg_idx.size()) + " negative)");
    }

    Rng rng(spec.seed);
    rng.shuffle(pos_idx);
    rng.shuffle(neg_idx);

    const auto test_count = [&](std::size_t n) {
        auto k = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * spec.test_fraction));
        // keep both sides non-empty per class
        if (k == 0) k = 1;
        if (k >= n) k = n - 1;
        return k;
    };
    const std::size_t pos_test = test_count(pos_idx.size());
    const std::size_t neg_test = test_count(neg_idx.size());

    std::vector<std::size_t> test_ids, train_ids;
    test_ids.insert(test_ids.end(), pos_idx.begin(), pos_idx.begin() + pos_test);
    test_ids.insert(test_ids.end(), neg_idx.begin(), neg_idx.begin() + neg_test);
    train_ids.insert(train_ids.end(), pos_idx.begin() + pos_test, pos_idx.end());
    train_ids.insert(train_ids.end(), neg_idx.begin() + neg_test, neg_idx.end());

    auto by_udi = [&](std::size_t a, std::size_t b) {
        return records[a].record.udi < records[b].record.udi;
    };
    std::sort(test_ids.begin(), test_ids.end(), by_udi);
    std::sort(train_ids.begin(), train_ids.end(), by_udi);

    DataSplit split;
    split.train.reserve(train_ids.size());
    split.test.reserve(test_ids.size());
    for (std::size_t i : train_ids) split.train.push_back(records[i]);
    for (std::size_t i : test_ids) split.test.push_back(records[i]);
    return split;
}

inline constexpr std::size_t kRawFeatureCount = 8;

// [air, process, rpm, torque, wear, is_L, is_M, is_H]
inline std::vector<double> featurize(const MachineRecord& r) {
    std::vector<double> v(kRawFeatureCount, 0.0);
    v[0] = r.air_temp;
    v[1] = r.process_temp;
    v[2] = r.rot_speed;
    v[3] = r.torque;
    v[4] = r.tool_wear;
    v[5 + static_cast<int>(r.machine_type)] = 1.0;
    return v;
}

inline const std::array<const char*, kRawFeatureCount>& raw_feature_names() {
    static const std::array<const char*, kRawFeatureCount> names = {
        "air_temp", "process_temp", "rot_speed", "torque", "tool_wear",
        "type_L", "type_M", "type_H"};
    return names;
}

}  // namespace pmbench
