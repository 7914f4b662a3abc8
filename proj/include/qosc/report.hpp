#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace qosc {

/// Outcome of one numerical check. `pass` is always `residual < tolerance`.
struct CheckReport {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<std::string> detail;

    static CheckReport make(std::string name, double residual, double tolerance,
                            std::optional<std::string> detail = std::nullopt)
    {
        return {std::move(name), residual, tolerance, residual < tolerance, std::move(detail)};
    }
};

inline bool all_pass(const std::vector<CheckReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

inline double max_residual(const std::vector<CheckReport>& reports)
{
    double m = 0.0;
    for (const auto& r : reports) m = std::max(m, r.residual);
    return m;
}

inline const CheckReport* find_report(const std::vector<CheckReport>& reports, const std::string& name)
{
    for (const auto& r : reports)
        if (r.name == name) return &r;
    return nullptr;
}

} // namespace qosc
