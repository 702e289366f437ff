#pragma once

// Bibliographic records and ingestion: the tagged-field export format,
// the canonical line-delimited record stream, citable-item filtering,
// affiliation resolution against a unit registry, and citing->cited
// link building. Parsing is streaming and single-pass; every parsed
// value is immutable afterwards.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fraccite {

struct bibdata_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : bibdata_error {
    using bibdata_error::bibdata_error;
};
struct field_error : bibdata_error {
    using bibdata_error::bibdata_error;
};

// ---------------------------------------------------------------------------
// Document types

enum class doc_kind { article, letter, proceedings_paper, review, other };

struct doc_type {
    doc_kind kind = doc_kind::other;
    std::string label;  // original label as parsed
};

inline bool is_citable(doc_kind k) { return k != doc_kind::other; }

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::string_view doc_kind_name(doc_kind k) {
    switch (k) {
        case doc_kind::article: return "article";
        case doc_kind::letter: return "letter";
        case doc_kind::proceedings_paper: return "proceedings_paper";
        case doc_kind::review: return "review";
        case doc_kind::other: return "other";
    }
    return "other";
}

// Label -> kind normalization table. Matching is case-insensitive on the
// whole label; unmatched labels become doc_kind::other with the label
// preserved, never dropped.
class doctype_table {
public:
    doctype_table() = default;
    explicit doctype_table(std::vector<std::pair<std::string, doc_kind>> entries) {
        for (auto& [label, kind] : entries) map_[to_lower(label)] = kind;
    }

    doc_type normalize(std::string_view label) const {
        doc_type d;
        d.label = std::string(label);
        const auto it = map_.find(to_lower(label));
        d.kind = it == map_.end() ? doc_kind::other : it->second;
        return d;
    }

private:
    std::map<std::string, doc_kind> map_;
};

inline const doctype_table& default_doctype_table() {
    static const doctype_table table{{
        {"article", doc_kind::article},
        {"letter", doc_kind::letter},
        {"review", doc_kind::review},
        {"proceedings paper", doc_kind::proceedings_paper},
        {"proceeding paper", doc_kind::proceedings_paper},
        {"conference paper", doc_kind::proceedings_paper},
        {"article; proceedings paper", doc_kind::proceedings_paper},
        {"article; book chapter", doc_kind::article},
        {"review; book chapter", doc_kind::review},
    }};
    return table;
}

// Loads a two-column delimited table: label,kind (kind one of article,
// letter, proceedings_paper, review).
doctype_table load_doctype_table(std::istream& in);

// ---------------------------------------------------------------------------
// Core records

struct year_range {
    int first = 0;
    int last = 0;
    bool contains(int y) const { return y >= first && y <= last; }
    bool empty() const { return last < first; }
};

struct cited_paper {
    std::string id;
    int year = 0;
    doc_type doctype;
    std::vector<std::string> unit_ids;  // sorted, unique
};

struct citing_paper {
    std::string id;
    int year = 0;
    doc_type doctype;
    int ref_count = 0;                   // NR: full reference-list length
    std::vector<std::string> cited_ids;  // sorted, unique, within-corpus ids
    std::vector<std::string> unit_ids;   // optional; used for self-citation exclusion
};

struct unit_info {
    std::string unit_id;
    std::string display_name;
    double faculty_fte = 0.0;
    std::vector<std::string> address_patterns;
};

class unit_registry {
public:
    unit_registry() = default;
    explicit unit_registry(std::vector<unit_info> units) : units_(std::move(units)) {
        for (std::size_t i = 0; i < units_.size(); ++i) {
            const unit_info& u = units_[i];
            if (u.unit_id.empty()) throw bibdata_error("registry: empty unit_id");
            if (!(u.faculty_fte > 0.0))
                throw bibdata_error("registry: unit '" + u.unit_id + "' needs faculty_fte > 0");
            if (u.address_patterns.empty())
                throw bibdata_error("registry: unit '" + u.unit_id +
                                    "' needs at least one address pattern");
            if (!index_.emplace(u.unit_id, i).second)
                throw bibdata_error("registry: duplicate unit_id '" + u.unit_id + "'");
        }
    }

    const std::vector<unit_info>& units() const { return units_; }
    std::size_t size() const { return units_.size(); }
    bool contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

    const unit_info& at(std::string_view id) const {
        const auto it = index_.find(std::string(id));
        if (it == index_.end())
            throw bibdata_error("registry: unknown unit '" + std::string(id) + "'");
        return units_[it->second];
    }

private:
    std::vector<unit_info> units_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

struct corpus_fragment {
    std::vector<cited_paper> cited;
    std::vector<citing_paper> citing;
};

struct corpus {
    std::vector<cited_paper> cited;
    std::vector<citing_paper> citing;
    unit_registry registry;
    year_range pub_window;
    year_range cite_window;
};

// ---------------------------------------------------------------------------
// Tagged-field export parsing

// One record of the two-letter-tagged export. Recognized fields are
// lifted out; everything else is preserved verbatim in extras.
struct wos_record {
    std::string id;                 // UT
    std::string pub_type;           // PT
    std::string doctype_label;      // DT
    std::optional<int> year;        // PY
    std::optional<int> ref_count;   // NR
    std::vector<std::string> addresses;  // C1, one entry per line
    std::map<std::string, std::vector<std::string>> extras;
    std::size_t offset = 0;  // byte offset of the record's first line
};

struct wos_field_error {
    std::string record_id;  // UT when present, else "record @<offset>"
    std::string field;
    std::string message;
};

struct wos_parse_result {
    std::vector<wos_record> records;
    std::vector<wos_field_error> field_errors;
};

namespace detail {

inline bool parse_int_strict(const std::string& s, int& out) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    long v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
        if (v > 2000000000L) return false;
    }
    out = static_cast<int>(s[0] == '-' ? -v : v);
    return true;
}

inline std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

// Parses a tagged-field export: records are blocks of `TAG value` lines
// terminated by an `ER` line; continuation lines start with three
// spaces; `EF` ends the file; `FN`/`VR` header lines before the first
// record are skipped. A record whose NR/PY is non-numeric is reported in
// field_errors and omitted from records; the rest of the stream is still
// parsed. EOF inside an open record throws parse_error naming the byte
// offset where the record started.
inline wos_parse_result parse_wos_tagged(std::istream& in) {
    wos_parse_result result;
    std::map<std::string, std::vector<std::string>> fields;
    std::string line, current_tag;
    std::size_t offset = 0, record_offset = 0;
    bool in_record = false, saw_record_field = false;

    auto record_name = [&]() {
        const auto it = fields.find("UT");
        if (it != fields.end() && !it->second.empty()) return it->second.front();
        return "record @" + std::to_string(record_offset);
    };

    auto flush_record = [&]() {
        wos_record rec;
        rec.offset = record_offset;
        bool ok = true;
        for (auto& [tag, values] : fields) {
            if (tag == "UT") {
                rec.id = values.empty() ? "" : values.front();
            } else if (tag == "PT") {
                rec.pub_type = values.empty() ? "" : values.front();
            } else if (tag == "DT") {
                rec.doctype_label = values.empty() ? "" : values.front();
            } else if (tag == "PY" || tag == "NR") {
                int v = 0;
                if (values.empty() || !detail::parse_int_strict(values.front(), v)) {
                    result.field_errors.push_back(
                        {record_name(), tag,
                         "non-integer " + tag + " '" +
                             (values.empty() ? std::string() : values.front()) + "'"});
                    ok = false;
                } else if (tag == "PY") {
                    rec.year = v;
                } else {
                    rec.ref_count = v;
                }
            } else if (tag == "C1") {
                rec.addresses = values;
            } else {
                rec.extras[tag] = values;
            }
        }
        if (ok) result.records.push_back(std::move(rec));
        fields.clear();
        in_record = false;
        saw_record_field = false;
    };

    while (std::getline(in, line)) {
        const std::size_t line_offset = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("   ", 0) == 0) {  // continuation of the previous tag
            if (!current_tag.empty()) fields[current_tag].push_back(detail::strip(line));
            continue;
        }
        if (line.empty()) continue;
        const std::string tag = line.size() >= 2 ? line.substr(0, 2) : line;
        const std::string value = line.size() > 3 ? detail::strip(line.substr(3)) : "";
        if (tag == "EF") break;
        if (tag == "ER") {
            flush_record();
            current_tag.clear();
            continue;
        }
        if (!in_record && (tag == "FN" || tag == "VR")) continue;  // file header
        if (!in_record) {
            in_record = true;
            record_offset = line_offset;
        }
        saw_record_field = true;
        current_tag = tag;
        fields[tag].push_back(value);
    }
    if (in_record && saw_record_field)
        throw parse_error("truncated record: EOF before ER for record starting at byte " +
                          std::to_string(record_offset));
    return result;
}

// ---------------------------------------------------------------------------
// Canonical record stream (one JSON object per line)

namespace detail {

inline std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* name,
                                           std::size_t line_no) {
    const auto it = obj.find(name);
    if (it == obj.end())
        throw field_error("line " + std::to_string(line_no) + ": missing mandatory field '" +
                          name + "'");
    return *it;
}

}  // namespace detail

// Parses the canonical stream. Mandatory fields per line: role, id,
// year, doctype; cited lines add units, citing lines add ref_count and
// cited_ids. Unknown fields are ignored; citing lines may carry an
// optional units array (used only for self-citation exclusion).
inline corpus_fragment parse_canonical(std::istream& in,
                                       const doctype_table& table = default_doctype_table()) {
    corpus_fragment frag;
    std::map<std::string, std::size_t> first_line_of_id;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::strip(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw parse_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string role = detail::require_field(obj, "role", line_no).get<std::string>();
        const std::string id = detail::require_field(obj, "id", line_no).get<std::string>();
        const auto [it, inserted] = first_line_of_id.emplace(id, line_no);
        if (!inserted)
            throw parse_error("duplicate id '" + id + "' on lines " +
                              std::to_string(it->second) + " and " + std::to_string(line_no));
        const int year = detail::require_field(obj, "year", line_no).get<int>();
        const doc_type doctype =
            table.normalize(detail::require_field(obj, "doctype", line_no).get<std::string>());
        if (role == "cited") {
            cited_paper p;
            p.id = id;
            p.year = year;
            p.doctype = doctype;
            p.unit_ids = detail::sorted_unique(
                detail::require_field(obj, "units", line_no).get<std::vector<std::string>>());
            frag.cited.push_back(std::move(p));
        } else if (role == "citing") {
            citing_paper p;
            p.id = id;
            p.year = year;
            p.doctype = doctype;
            p.ref_count = detail::require_field(obj, "ref_count", line_no).get<int>();
            if (p.ref_count < 0)
                throw field_error("line " + std::to_string(line_no) +
                                  ": ref_count must be non-negative");
            p.cited_ids = detail::sorted_unique(
                detail::require_field(obj, "cited_ids", line_no).get<std::vector<std::string>>());
            if (obj.contains("units"))
                p.unit_ids = detail::sorted_unique(obj["units"].get<std::vector<std::string>>());
            frag.citing.push_back(std::move(p));
        } else {
            throw field_error("line " + std::to_string(line_no) + ": unknown role '" + role +
                              "'");
        }
    }
    return frag;
}

inline void serialize_canonical(const corpus_fragment& frag, std::ostream& out) {
    for (const auto& p : frag.cited) {
        nlohmann::json obj{{"role", "cited"},
                           {"id", p.id},
                           {"year", p.year},
                           {"doctype", p.doctype.label},
                           {"units", p.unit_ids}};
        out << obj.dump() << '\n';
    }
    for (const auto& p : frag.citing) {
        nlohmann::json obj{{"role", "citing"},
                           {"id", p.id},
                           {"year", p.year},
                           {"doctype", p.doctype.label},
                           {"ref_count", p.ref_count},
                           {"cited_ids", p.cited_ids}};
        if (!p.unit_ids.empty()) obj["units"] = p.unit_ids;
        out << obj.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Filtering, affiliation resolution, linking

struct filter_stats {
    std::size_t kept = 0;
    std::size_t dropped_doctype = 0;
    std::size_t dropped_year = 0;
};

// Retains citable items (article, letter, proceedings paper, review)
// published inside the window. Total and idempotent.
inline std::vector<cited_paper> filter_citable(std::vector<cited_paper> records,
                                               year_range window,
                                               filter_stats* stats = nullptr) {
    filter_stats local;
    std::vector<cited_paper> out;
    out.reserve(records.size());
    for (auto& p : records) {
        if (!is_citable(p.doctype.kind)) {
            ++local.dropped_doctype;
        } else if (!window.contains(p.year)) {
            ++local.dropped_year;
        } else {
            ++local.kept;
            out.push_back(std::move(p));
        }
    }
    if (stats) *stats = local;
    return out;
}

// Every unit whose any address pattern occurs case-insensitively in any
// address line. Co-affiliated papers are attributed wholly to each
// matching unit. Empty result is legal.
inline std::vector<std::string> resolve_units(std::span<const std::string> addresses,
                                              const unit_registry& registry) {
    std::vector<std::string> hits;
    std::vector<std::string> lowered;
    lowered.reserve(addresses.size());
    for (const auto& a : addresses) lowered.push_back(to_lower(a));
    for (const auto& unit : registry.units()) {
        bool match = false;
        for (const auto& pattern : unit.address_patterns) {
            const std::string p = to_lower(pattern);
            for (const auto& line : lowered) {
                if (line.find(p) != std::string::npos) {
                    match = true;
                    break;
                }
            }
            if (match) break;
        }
        if (match) hits.push_back(unit.unit_id);
    }
    return detail::sorted_unique(std::move(hits));
}

struct citation_link {
    std::string citing_id;
    std::string cited_id;
};

struct link_stats {
    std::size_t dangling_dropped = 0;       // references to papers outside the corpus
    std::size_t citing_out_of_window = 0;   // citing records outside the citation window
};

// One (citing, cited) pair per reference into the filtered cited set.
// Citing records outside the citation window contribute nothing;
// references to unknown ids are dropped and counted (they cite outside
// the harvested set but still count toward NR).
inline std::vector<citation_link> build_citation_links(const corpus& c,
                                                       link_stats* stats = nullptr) {
    link_stats local;
    std::set<std::string_view> known;
    for (const auto& p : c.cited) known.insert(p.id);
    std::vector<citation_link> links;
    for (const auto& citing : c.citing) {
        if (!c.cite_window.contains(citing.year)) {
            ++local.citing_out_of_window;
            continue;
        }
        for (const auto& cited_id : citing.cited_ids) {
            if (known.count(cited_id))
                links.push_back({citing.id, cited_id});
            else
                ++local.dangling_dropped;
        }
    }
    if (stats) *stats = local;
    return links;
}

// ---------------------------------------------------------------------------
// Registry / doctype-table file loading (simple quoted CSV)

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    if (quoted) throw parse_error("line " + std::to_string(line_no) + ": unterminated quote");
    cells.push_back(cell);
    return cells;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(strip(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(strip(cur));
    parts.erase(std::remove_if(parts.begin(), parts.end(),
                               [](const std::string& p) { return p.empty(); }),
                parts.end());
    return parts;
}

}  // namespace detail

// Loads a registry table with header
// unit_id,display_name,faculty_fte,address_patterns; patterns are
// semicolon-separated within the cell.
inline unit_registry load_unit_registry(std::istream& in) {
    std::vector<unit_info> units;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::strip(line).empty() || line[0] == '#') continue;
        const auto cells = detail::split_csv_line(line, line_no);
        if (!header_seen) {
            if (cells.size() < 4 || detail::strip(cells[0]) != "unit_id")
                throw parse_error(
                    "registry: expected header unit_id,display_name,faculty_fte,address_patterns");
            header_seen = true;
            continue;
        }
        if (cells.size() < 4)
            throw parse_error("registry line " + std::to_string(line_no) +
                              ": expected 4 columns");
        unit_info u;
        u.unit_id = detail::strip(cells[0]);
        u.display_name = detail::strip(cells[1]);
        try {
            u.faculty_fte = std::stod(cells[2]);
        } catch (const std::exception&) {
            throw field_error("registry line " + std::to_string(line_no) +
                              ": non-numeric faculty_fte '" + cells[2] + "'");
        }
        u.address_patterns = detail::split_on(cells[3], ';');
        units.push_back(std::move(u));
    }
    if (!header_seen) throw parse_error("registry: empty file");
    return unit_registry(std::move(units));
}

inline doctype_table load_doctype_table(std::istream& in) {
    std::vector<std::pair<std::string, doc_kind>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::strip(line).empty() || line[0] == '#') continue;
        const auto cells = detail::split_csv_line(line, line_no);
        if (line_no == 1 && cells.size() >= 2 && detail::strip(cells[0]) == "label") continue;
        if (cells.size() < 2)
            throw parse_error("doctype table line " + std::to_string(line_no) +
                              ": expected label,kind");
        const std::string kind = detail::strip(cells[1]);
        doc_kind k;
        if (kind == "article") k = doc_kind::article;
        else if (kind == "letter") k = doc_kind::letter;
        else if (kind == "proceedings_paper") k = doc_kind::proceedings_paper;
        else if (kind == "review") k = doc_kind::review;
        else
            throw field_error("doctype table line " + std::to_string(line_no) +
                              ": unknown kind '" + kind + "'");
        entries.emplace_back(detail::strip(cells[0]), k);
    }
    return doctype_table(std::move(entries));
}

}  // namespace fraccite
