#include "riskonly/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace riskonly {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string::size_type pos = 0;
    while (true) {
        const auto next = line.find(delimiter, pos);
        if (next == std::string::npos) {
            cells.push_back(trim(line.substr(pos)));
            break;
        }
        cells.push_back(trim(line.substr(pos, next - pos)));
        pos = next + 1;
    }
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::optional<YearMonth> parse_year_month(std::string_view text) {
    // strict YYYY-MM
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    int year = 0, month = 0;
    auto r1 = std::from_chars(text.data(), text.data() + 4, year);
    auto r2 = std::from_chars(text.data() + 5, text.data() + 7, month);
    if (r1.ec != std::errc() || r1.ptr != text.data() + 4) return std::nullopt;
    if (r2.ec != std::errc() || r2.ptr != text.data() + 7) return std::nullopt;
    if (month < 1 || month > 12) return std::nullopt;
    return YearMonth{year, month};
}

std::string to_string(const YearMonth& ym) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", ym.year, ym.month);
    return buf;
}

ReturnPanel::ReturnPanel(std::vector<YearMonth> dates, std::vector<std::string> assets,
                         Eigen::MatrixXd returns)
    : dates_(std::move(dates)), assets_(std::move(assets)), returns_(std::move(returns)) {
    const auto T = static_cast<Eigen::Index>(dates_.size());
    const auto N = static_cast<Eigen::Index>(assets_.size());
    if (returns_.rows() != T || returns_.cols() != N)
        throw Error(Errc::MalformedRow, "return matrix shape does not match dates/assets");
    if (N < 2)
        throw Error(Errc::TooFewAssets,
                    "panel needs at least 2 assets, got " + std::to_string(N));
    for (Eigen::Index t = 1; t < T; ++t) {
        const int step = dates_[static_cast<size_t>(t)].index() -
                         dates_[static_cast<size_t>(t - 1)].index();
        if (step == 0)
            throw Error(Errc::DuplicateDate,
                        "duplicate month " + to_string(dates_[static_cast<size_t>(t)]));
        if (step != 1)
            throw Error(Errc::NonMonthlyGap,
                        "gap between " + to_string(dates_[static_cast<size_t>(t - 1)]) +
                            " and " + to_string(dates_[static_cast<size_t>(t)]));
    }
    if (!returns_.allFinite())
        throw Error(Errc::MalformedRow, "panel contains non-finite returns");
}

ReturnPanel load_panel(std::istream& source, const LoadOptions& options) {
    std::string line;
    if (!std::getline(source, line))
        throw Error(Errc::MalformedRow, "empty input: missing header row");
    // tolerate a UTF-8 BOM on the first line
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    auto header = split_line(line, options.delimiter);
    if (header.empty() || trim(header[0]).empty())
        throw Error(Errc::MalformedRow, "header must start with a date column");
    {
        std::string first = header[0];
        std::transform(first.begin(), first.end(), first.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (first != "date")
            throw Error(Errc::MalformedRow, "first header column must be 'date', got '" +
                                                header[0] + "'");
    }
    std::vector<std::string> assets(header.begin() + 1, header.end());
    if (assets.size() < 2)
        throw Error(Errc::TooFewAssets, "header names " + std::to_string(assets.size()) +
                                            " asset column(s); at least 2 required");
    {
        std::set<std::string> seen;
        for (const auto& a : assets) {
            if (a.empty())
                throw Error(Errc::MalformedRow, "empty asset name in header");
            if (!seen.insert(a).second)
                throw Error(Errc::MalformedRow, "duplicate asset column '" + a + "'");
        }
    }

    struct Row {
        YearMonth date;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line, options.delimiter);
        if (cells.size() != assets.size() + 1)
            throw Error(Errc::MalformedRow,
                        "row " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(assets.size() + 1));
        auto date = parse_year_month(cells[0]);
        if (!date)
            throw Error(Errc::MalformedRow, "row " + std::to_string(line_no) +
                                                ": bad date '" + cells[0] + "'");
        Row row{*date, {}};
        row.values.reserve(assets.size());
        for (size_t i = 1; i < cells.size(); ++i) {
            double value = 0.0;
            if (!parse_double(cells[i], value) || !std::isfinite(value))
                throw Error(Errc::MalformedRow, "row " + std::to_string(line_no) +
                                                    ": bad return '" + cells[i] + "'");
            row.values.push_back(value);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(Errc::MalformedRow, "no data rows");

    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.date < b.date; });

    std::vector<YearMonth> dates;
    dates.reserve(rows.size());
    Eigen::MatrixXd returns(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(assets.size()));
    for (size_t t = 0; t < rows.size(); ++t) {
        dates.push_back(rows[t].date);
        for (size_t i = 0; i < assets.size(); ++i)
            returns(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
                rows[t].values[i];
    }
    return ReturnPanel(std::move(dates), std::move(assets), std::move(returns));
}

ReturnPanel load_panel_file(const std::string& path, const LoadOptions& options) {
    std::ifstream file(path);
    if (!file.is_open())
        throw Error(Errc::IoError, "cannot open panel file '" + path + "'");
    return load_panel(file, options);
}

void write_panel(const ReturnPanel& panel, std::ostream& out, const LoadOptions& options) {
    const char d = options.delimiter;
    out << "date";
    for (const auto& a : panel.assets()) out << d << a;
    out << '\n';
    char buf[64];
    for (int t = 0; t < panel.month_count(); ++t) {
        out << to_string(panel.dates()[static_cast<size_t>(t)]);
        for (int i = 0; i < panel.asset_count(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", panel.returns()(t, i));
            out << d << buf;
        }
        out << '\n';
    }
}

PanelSlice slice_window(const ReturnPanel& panel, int end_month, int window) {
    if (window < 1)
        throw Error(Errc::WindowTooShort, "window must be >= 1, got " + std::to_string(window));
    if (end_month < window)
        throw Error(Errc::InsufficientHistory,
                    "window of " + std::to_string(window) + " months needs end month >= " +
                        std::to_string(window) + ", got " + std::to_string(end_month));
    if (end_month > panel.month_count())
        throw Error(Errc::InsufficientHistory,
                    "end month " + std::to_string(end_month) + " past panel length " +
                        std::to_string(panel.month_count()));
    return PanelSlice{&panel, end_month - window, end_month};
}

}  // namespace riskonly
