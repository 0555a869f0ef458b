#include "glyco/pred_ega.hpp"

#include <ostream>

#include "glyco/csv.hpp"
#include "glyco/error.hpp"

namespace glyco {

namespace {

void fill_percent(RangeTally& t) {
    const std::size_t n = t.classified();
    if (n == 0) {
        t.percent.reset();
        return;
    }
    const double total = static_cast<double>(n);
    t.percent = std::array<double, 3>{100.0 * static_cast<double>(t.accurate) / total,
                                      100.0 * static_cast<double>(t.benign) / total,
                                      100.0 * static_cast<double>(t.erroneous) / total};
}

}  // namespace

std::vector<std::optional<double>> central_rates(std::span<const double> values,
                                                 std::span<const double> timestamps,
                                                 RateDenominator denominator) {
    if (values.size() != timestamps.size()) {
        throw InvalidInput("central_rates: values and timestamps differ in length");
    }
    std::vector<std::optional<double>> rates(values.size());
    const double factor = denominator == RateDenominator::Doubled ? 2.0 : 1.0;
    for (std::size_t j = 1; j + 1 < values.size(); ++j) {
        const double span = timestamps[j + 1] - timestamps[j - 1];
        if (span == 0.0) {
            throw DataError("central_rates: equal timestamps around position " + std::to_string(j));
        }
        rates[j] = (values[j + 1] - values[j - 1]) / (factor * span);
    }
    return rates;
}

Category classify_point(const EvalPoint& p, const ZoneTables& tables) {
    if (!p.predicted_rate || !p.reference_rate) {
        throw InvalidInput("classify_point: rates are required");
    }
    const Zone pz = tables.point_zone(p.predicted, p.reference, *p.reference_rate);
    const Zone rz = tables.rate_zone(*p.predicted_rate, *p.reference_rate);
    return tables.classify(pz, rz, p.reference);
}

PredEgaGrid build_grid(std::span<const EvalPoint> points, const ZoneTables& tables) {
    PredEgaGrid grid;
    for (const auto& p : points) {
        auto& tally = grid[classify_glucose(p.reference)];
        if (!p.predicted_rate || !p.reference_rate) {
            ++tally.excluded;
            continue;
        }
        switch (classify_point(p, tables)) {
            case Category::Accurate:
                ++tally.accurate;
                break;
            case Category::Benign:
                ++tally.benign;
                break;
            case Category::Erroneous:
                ++tally.erroneous;
                break;
        }
    }
    for (auto& t : grid.ranges) {
        fill_percent(t);
    }
    return grid;
}

PredEgaGrid average_grids(std::span<const PredEgaGrid> grids, Averaging averaging) {
    if (grids.empty()) {
        throw InvalidInput("average_grids: no grids");
    }
    PredEgaGrid out;
    for (std::size_t r = 0; r < 3; ++r) {
        auto& dst = out.ranges[r];
        std::array<double, 3> sum{};
        std::size_t contributing = 0;
        for (const auto& g : grids) {
            const auto& src = g.ranges[r];
            dst.accurate += src.accurate;
            dst.benign += src.benign;
            dst.erroneous += src.erroneous;
            dst.excluded += src.excluded;
            if (src.percent) {
                for (std::size_t k = 0; k < 3; ++k) {
                    sum[k] += (*src.percent)[k];
                }
                ++contributing;
            }
        }
        if (averaging == Averaging::Pooled) {
            fill_percent(dst);
        } else if (contributing > 0) {
            const double c = static_cast<double>(contributing);
            dst.percent = std::array<double, 3>{sum[0] / c, sum[1] / c, sum[2] / c};
        }
    }
    return out;
}

void write_grid_csv(std::ostream& out, const PredEgaGrid& grid) {
    out << "range,accurate_pct,benign_pct,erroneous_pct,n_points,n_excluded\n";
    for (const auto r : kAllRanges) {
        const auto& t = grid[r];
        out << range_name(r);
        for (std::size_t k = 0; k < 3; ++k) {
            out << ',';
            if (t.percent) {
                out << csv::format_fixed((*t.percent)[k], 2);
            }
        }
        out << ',' << t.classified() << ',' << t.excluded << '\n';
    }
}

}  // namespace glyco
