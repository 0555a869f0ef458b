#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace glyco {

/// Error-grid zones shared by the point grid and the rate grid.
enum class Zone { A, B, uC, lC, uD, lD, uE, lE };

inline constexpr std::size_t kZoneCount = 8;

enum class Category { Accurate, Benign, Erroneous };

std::string_view zone_name(Zone z) noexcept;
std::string_view category_name(Category c) noexcept;
/// Throws InvalidInput for an unknown label.
Zone parse_zone(std::string_view name);

/// Rule data for PRED-EGA: ordered first-match rules for the point grid and
/// the rate grid, and one zone-pair -> category matrix per glycemic range.
///
/// Rules are conjunctions of linear inequalities over named variables, stored
/// in a JSON file so the clinical boundaries stay out of the code. Loading
/// verifies that both rule lists end in an unconditional catch-all rule,
/// which makes zone assignment total.
class ZoneTables {
public:
    /// The table set compiled into the library.
    static const ZoneTables& builtin();
    /// The JSON text of the builtin tables.
    static std::string_view builtin_text();

    /// Throws ConfigError on malformed content.
    static ZoneTables parse(std::string_view json_text);
    static ZoneTables load(const std::filesystem::path& path);

    Zone point_zone(double predicted, double reference, double reference_rate) const;
    Zone rate_zone(double predicted_rate, double reference_rate) const;
    /// Category for a (point zone, rate zone) pair using the matrix of the
    /// reference's glycemic range.
    Category classify(Zone point, Zone rate, double reference) const;

    const std::string& version() const noexcept { return version_; }
    /// Lower-case hex SHA-256 of the JSON text the tables were parsed from.
    const std::string& checksum() const noexcept { return checksum_; }

    struct Constraint {
        std::vector<std::pair<int, double>> terms;  // variable slot, coefficient
        enum class Op { Lt, Le, Gt, Ge } op;
        double value;
    };
    using Conjunction = std::vector<Constraint>;
    struct Rule {
        Zone zone;
        std::vector<Conjunction> any_of;
    };
    struct Modifier {
        Conjunction when;
        double upper;
        double lower;
    };
    using Matrix = std::array<std::array<Category, kZoneCount>, kZoneCount>;

private:
    std::string version_;
    std::string checksum_;
    std::vector<Modifier> modifiers_;
    std::vector<Rule> point_rules_;
    std::vector<Rule> rate_rules_;
    std::array<Matrix, 3> matrices_{};
};

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace glyco
