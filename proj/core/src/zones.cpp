#include "glyco/zones.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "glyco/error.hpp"
#include "glyco/stratify.hpp"

namespace glyco {

namespace detail {
extern const char* const kBuiltinZoneTables;
}

namespace {

using json = nlohmann::json;

// Variable slots. Point rules see pred/ref/up/low, rate rules pred_rate/ref_rate,
// boundary modifiers ref_rate.
enum Slot : int { kPred, kRef, kUp, kLow, kPredRate, kRefRate, kSlotCount };
using Vars = std::array<double, kSlotCount>;

int slot_of(const std::string& name) {
    static const std::array<std::string_view, kSlotCount> names{"pred", "ref", "up", "low",
                                                               "pred_rate", "ref_rate"};
    for (int i = 0; i < kSlotCount; ++i) {
        if (names[i] == name) {
            return i;
        }
    }
    throw ConfigError("zone tables: unknown variable '" + name + "'");
}

ZoneTables::Constraint::Op parse_op(const std::string& op) {
    using Op = ZoneTables::Constraint::Op;
    if (op == "<") return Op::Lt;
    if (op == "<=") return Op::Le;
    if (op == ">") return Op::Gt;
    if (op == ">=") return Op::Ge;
    throw ConfigError("zone tables: unknown operator '" + op + "'");
}

ZoneTables::Conjunction parse_conjunction(const json& arr) {
    ZoneTables::Conjunction out;
    for (const auto& c : arr) {
        ZoneTables::Constraint con;
        for (const auto& [name, coef] : c.at("terms").items()) {
            con.terms.emplace_back(slot_of(name), coef.get<double>());
        }
        con.op = parse_op(c.at("op").get<std::string>());
        con.value = c.at("value").get<double>();
        out.push_back(std::move(con));
    }
    return out;
}

bool holds(const ZoneTables::Constraint& c, const Vars& v) {
    using Op = ZoneTables::Constraint::Op;
    double lhs = 0.0;
    for (const auto& [slot, coef] : c.terms) {
        lhs += coef * v[static_cast<std::size_t>(slot)];
    }
    switch (c.op) {
        case Op::Lt:
            return lhs < c.value;
        case Op::Le:
            return lhs <= c.value;
        case Op::Gt:
            return lhs > c.value;
        case Op::Ge:
            return lhs >= c.value;
    }
    return false;
}

bool holds(const ZoneTables::Conjunction& conj, const Vars& v) {
    for (const auto& c : conj) {
        if (!holds(c, v)) {
            return false;
        }
    }
    return true;
}

std::vector<ZoneTables::Rule> parse_rules(const json& arr, const char* section) {
    std::vector<ZoneTables::Rule> rules;
    for (const auto& r : arr) {
        ZoneTables::Rule rule{parse_zone(r.at("zone").get<std::string>()), {}};
        for (const auto& conj : r.at("any_of")) {
            rule.any_of.push_back(parse_conjunction(conj));
        }
        rules.push_back(std::move(rule));
    }
    const bool total = !rules.empty() && [&] {
        for (const auto& conj : rules.back().any_of) {
            if (conj.empty()) return true;
        }
        return false;
    }();
    if (!total) {
        throw ConfigError(std::string("zone tables: ") + section +
                          " must end with an unconditional rule");
    }
    return rules;
}

Zone first_match(const std::vector<ZoneTables::Rule>& rules, const Vars& v) {
    for (const auto& rule : rules) {
        for (const auto& conj : rule.any_of) {
            if (holds(conj, v)) {
                return rule.zone;
            }
        }
    }
    return rules.back().zone;  // unreachable: the last rule is unconditional
}

Category parse_category(const std::string& s) {
    if (s == "accurate") return Category::Accurate;
    if (s == "benign") return Category::Benign;
    if (s == "erroneous") return Category::Erroneous;
    throw ConfigError("zone tables: unknown category '" + s + "'");
}

ZoneTables::Matrix parse_matrix(const json& m, const std::string& range) {
    ZoneTables::Matrix out;
    const Category fallback = parse_category(m.at("otherwise").get<std::string>());
    for (auto& row : out) {
        row.fill(fallback);
    }
    std::array<std::array<bool, kZoneCount>, kZoneCount> seen{};
    for (const char* key : {"accurate", "benign", "erroneous"}) {
        if (!m.contains(key)) {
            continue;
        }
        const Category cat = parse_category(key);
        for (const auto& pair : m.at(key)) {
            const auto p = static_cast<std::size_t>(parse_zone(pair.at(0).get<std::string>()));
            const auto r = static_cast<std::size_t>(parse_zone(pair.at(1).get<std::string>()));
            if (seen[p][r]) {
                throw ConfigError("zone tables: combination." + range + " lists a zone pair twice");
            }
            seen[p][r] = true;
            out[p][r] = cat;
        }
    }
    return out;
}

void check_finite(std::initializer_list<double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) {
            throw InvalidInput("PRED-EGA inputs must be finite");
        }
    }
}

}  // namespace

std::string_view zone_name(Zone z) noexcept {
    static constexpr std::array<std::string_view, kZoneCount> names{"A",  "B",  "uC", "lC",
                                                                    "uD", "lD", "uE", "lE"};
    return names[static_cast<std::size_t>(z)];
}

std::string_view category_name(Category c) noexcept {
    switch (c) {
        case Category::Accurate:
            return "accurate";
        case Category::Benign:
            return "benign";
        case Category::Erroneous:
            return "erroneous";
    }
    return "?";
}

Zone parse_zone(std::string_view name) {
    for (std::size_t i = 0; i < kZoneCount; ++i) {
        if (zone_name(static_cast<Zone>(i)) == name) {
            return static_cast<Zone>(i);
        }
    }
    throw InvalidInput("unknown zone label '" + std::string(name) + "'");
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string_view ZoneTables::builtin_text() { return detail::kBuiltinZoneTables; }

const ZoneTables& ZoneTables::builtin() {
    static const ZoneTables tables = parse(builtin_text());
    return tables;
}

ZoneTables ZoneTables::parse(std::string_view json_text) {
    ZoneTables t;
    try {
        const json doc = json::parse(json_text);
        t.version_ = doc.at("version").get<std::string>();
        for (const auto& m : doc.at("boundary_modifiers")) {
            t.modifiers_.push_back(
                {parse_conjunction(m.at("when")), m.at("upper").get<double>(), m.at("lower").get<double>()});
        }
        t.point_rules_ = parse_rules(doc.at("point_rules"), "point_rules");
        t.rate_rules_ = parse_rules(doc.at("rate_rules"), "rate_rules");
        const auto& comb = doc.at("combination");
        for (const auto r : kAllRanges) {
            const std::string name(range_name(r));
            t.matrices_[range_index(r)] = parse_matrix(comb.at(name), name);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("zone tables: ") + e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("zone tables: ") + e.what());
    }
    t.checksum_ = sha256_hex(json_text);
    return t;
}

ZoneTables ZoneTables::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open zone tables " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Zone ZoneTables::point_zone(double predicted, double reference, double reference_rate) const {
    check_finite({predicted, reference, reference_rate});
    Vars v{};
    v[kPred] = predicted;
    v[kRef] = reference;
    v[kRefRate] = reference_rate;
    for (const auto& m : modifiers_) {
        if (holds(m.when, v)) {
            v[kUp] = m.upper;
            v[kLow] = m.lower;
            break;
        }
    }
    return first_match(point_rules_, v);
}

Zone ZoneTables::rate_zone(double predicted_rate, double reference_rate) const {
    check_finite({predicted_rate, reference_rate});
    Vars v{};
    v[kPredRate] = predicted_rate;
    v[kRefRate] = reference_rate;
    return first_match(rate_rules_, v);
}

Category ZoneTables::classify(Zone point, Zone rate, double reference) const {
    const auto& m = matrices_[range_index(classify_glucose(reference))];
    return m[static_cast<std::size_t>(point)][static_cast<std::size_t>(rate)];
}

}  // namespace glyco
