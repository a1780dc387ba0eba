#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskonly/errors.hpp"

namespace riskonly {

/// Month-granular date identifier ("YYYY-MM").
struct YearMonth {
    int year = 0;
    int month = 0;  // 1..12

    /// Months since year 0; consecutive calendar months differ by exactly 1.
    int index() const noexcept { return year * 12 + (month - 1); }
    static YearMonth from_index(int idx) noexcept {
        // floor division so negative indices behave
        int y = idx / 12, m = idx % 12;
        if (m < 0) { m += 12; --y; }
        return {y, m + 1};
    }
    friend bool operator==(const YearMonth&, const YearMonth&) = default;
    friend auto operator<=>(const YearMonth& a, const YearMonth& b) {
        return a.index() <=> b.index();
    }
};

std::optional<YearMonth> parse_year_month(std::string_view text);
std::string to_string(const YearMonth& ym);

/// Aligned monthly simple-return series for N assets.
///
/// Immutable after construction; the constructor enforces the panel
/// invariants (consecutive months, finite cells, N >= 2) and throws a typed
/// Error otherwise.
class ReturnPanel {
public:
    ReturnPanel(std::vector<YearMonth> dates, std::vector<std::string> assets,
                Eigen::MatrixXd returns);

    int month_count() const noexcept { return static_cast<int>(dates_.size()); }
    int asset_count() const noexcept { return static_cast<int>(assets_.size()); }
    const std::vector<YearMonth>& dates() const noexcept { return dates_; }
    const std::vector<std::string>& assets() const noexcept { return assets_; }
    /// T x N matrix of monthly simple returns (decimal fractions).
    const Eigen::MatrixXd& returns() const noexcept { return returns_; }

private:
    std::vector<YearMonth> dates_;
    std::vector<std::string> assets_;
    Eigen::MatrixXd returns_;
};

/// Half-open window [start, end) of panel months.
struct PanelSlice {
    const ReturnPanel* panel = nullptr;
    int start = 0;
    int end = 0;

    int length() const noexcept { return end - start; }
    auto returns() const { return panel->returns().middleRows(start, length()); }
};

struct LoadOptions {
    char delimiter = ',';
};

/// Parses a delimited-text stream with header `date,<asset1>,...,<assetN>`,
/// dates formatted YYYY-MM and returns as decimal fractions. Rows are sorted
/// by date before validation; duplicate dates and monthly gaps are rejected.
ReturnPanel load_panel(std::istream& source, const LoadOptions& options = {});

/// Convenience wrapper opening `path`; throws IoError naming the path.
ReturnPanel load_panel_file(const std::string& path, const LoadOptions& options = {});

/// Writes the panel in the load_panel input format. Values are printed with
/// 17 significant digits so that a write/load round trip reproduces the
/// panel bit for bit.
void write_panel(const ReturnPanel& panel, std::ostream& out,
                 const LoadOptions& options = {});

/// Strictly trailing window of `window` months ending just before
/// `end_month` (the month indexed end_month is excluded — no look-ahead).
PanelSlice slice_window(const ReturnPanel& panel, int end_month, int window);

}  // namespace riskonly
