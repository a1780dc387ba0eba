#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "riskonly/market_data.hpp"
#include "support/synthetic.hpp"

using namespace riskonly;

namespace {

template <typename F>
Errc error_code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a riskonly::Error");
    return Errc::ConfigError;
}

std::string csv_header(int assets) {
    std::string h = "date";
    for (const auto& a : synth::default_assets(assets)) h += "," + a;
    return h + "\n";
}

}  // namespace

TEST_CASE("load_panel parses the full-history four-asset layout") {
    std::ostringstream csv;
    csv << csv_header(4);
    auto dates = synth::monthly_dates(276, 1988, 1);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ret(-0.05, 0.05);
    for (const auto& d : dates)
        csv << to_string(d) << ',' << ret(rng) << ',' << ret(rng) << ',' << ret(rng) << ','
            << ret(rng) << '\n';

    std::istringstream in(csv.str());
    const ReturnPanel panel = load_panel(in);
    CHECK(panel.month_count() == 276);
    CHECK(panel.asset_count() == 4);
    CHECK(panel.dates().front() == YearMonth{1988, 1});
    CHECK(panel.dates().back() == YearMonth{2010, 12});
    CHECK(panel.assets()[0] == "equity");
}

TEST_CASE("load_panel minimal two-by-two input") {
    std::istringstream in("date,a,b\n2001-01,0.01,-0.02\n2001-02,0.00,0.03\n");
    const ReturnPanel panel = load_panel(in);
    CHECK(panel.month_count() == 2);
    CHECK(panel.asset_count() == 2);
    CHECK(panel.returns()(1, 1) == doctest::Approx(0.03));
}

TEST_CASE("load_panel accepts CRLF and blank trailing lines") {
    std::istringstream in("date,a,b\r\n2001-01,0.01,0.02\r\n2001-02,0.03,0.04\r\n\r\n");
    const ReturnPanel panel = load_panel(in);
    CHECK(panel.month_count() == 2);
}

TEST_CASE("load_panel sorts rows by date before validating") {
    std::istringstream in("date,a,b\n2001-03,0.3,0.3\n2001-01,0.1,0.1\n2001-02,0.2,0.2\n");
    const ReturnPanel panel = load_panel(in);
    CHECK(panel.dates().front() == YearMonth{2001, 1});
    CHECK(panel.returns()(2, 0) == doctest::Approx(0.3));
}

TEST_CASE("load_panel error taxonomy") {
    SUBCASE("skipped month") {
        std::istringstream in("date,a,b\n2001-01,0.1,0.1\n2001-03,0.2,0.2\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::NonMonthlyGap);
    }
    SUBCASE("duplicate date") {
        std::istringstream in("date,a,b\n2001-01,0.1,0.1\n2001-01,0.2,0.2\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::DuplicateDate);
    }
    SUBCASE("unparseable cell") {
        std::istringstream in("date,a,b\n2001-01,0.1,oops\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::MalformedRow);
    }
    SUBCASE("non-finite cell") {
        std::istringstream in("date,a,b\n2001-01,0.1,inf\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::MalformedRow);
    }
    SUBCASE("bad date") {
        std::istringstream in("date,a,b\n2001-13,0.1,0.1\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::MalformedRow);
    }
    SUBCASE("ragged row") {
        std::istringstream in("date,a,b\n2001-01,0.1\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::MalformedRow);
    }
    SUBCASE("single asset column") {
        std::istringstream in("date,a\n2001-01,0.1\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::TooFewAssets);
    }
    SUBCASE("missing date header") {
        std::istringstream in("time,a,b\n2001-01,0.1,0.1\n");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::MalformedRow);
    }
    SUBCASE("empty input") {
        std::istringstream in("");
        CHECK(error_code_of([&] { load_panel(in); }) == Errc::MalformedRow);
    }
}

TEST_CASE("write/load round trip reproduces the panel bit for bit") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal(0.0, 0.04);
    Eigen::MatrixXd returns(60, 3);
    for (int t = 0; t < 60; ++t)
        for (int i = 0; i < 3; ++i) returns(t, i) = normal(rng);
    const ReturnPanel original = synth::panel_from_matrix(returns);

    std::ostringstream first;
    write_panel(original, first);
    std::istringstream in(first.str());
    const ReturnPanel reloaded = load_panel(in);

    REQUIRE(reloaded.month_count() == original.month_count());
    REQUIRE(reloaded.asset_count() == original.asset_count());
    CHECK(reloaded.dates() == original.dates());
    CHECK(reloaded.assets() == original.assets());
    for (int t = 0; t < original.month_count(); ++t)
        for (int i = 0; i < original.asset_count(); ++i)
            CHECK(reloaded.returns()(t, i) == original.returns()(t, i));

    std::ostringstream second;
    write_panel(reloaded, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("slice_window addressing") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal(0.0, 0.02);
    Eigen::MatrixXd returns(276, 2);
    for (int t = 0; t < 276; ++t)
        for (int i = 0; i < 2; ++i) returns(t, i) = normal(rng);
    const ReturnPanel panel = synth::panel_from_matrix(returns);

    SUBCASE("first feasible window") {
        const PanelSlice s = slice_window(panel, 36, 36);
        CHECK(s.start == 0);
        CHECK(s.end == 36);
        CHECK(s.length() == 36);
    }
    SUBCASE("last feasible window") {
        const PanelSlice s = slice_window(panel, 275, 36);
        CHECK(s.start == 239);
        CHECK(s.end == 275);
    }
    SUBCASE("insufficient history") {
        CHECK(error_code_of([&] { slice_window(panel, 35, 36); }) ==
              Errc::InsufficientHistory);
    }
    SUBCASE("end month past panel") {
        CHECK(error_code_of([&] { slice_window(panel, 277, 36); }) ==
              Errc::InsufficientHistory);
    }
    SUBCASE("strictly trailing: the allocation month is never included") {
        std::uniform_int_distribution<int> window_dist(1, 60);
        for (int trial = 0; trial < 200; ++trial) {
            const int window = window_dist(rng);
            std::uniform_int_distribution<int> end_dist(window, 276);
            const int end_month = end_dist(rng);
            const PanelSlice s = slice_window(panel, end_month, window);
            CHECK(s.end <= end_month);
            CHECK(s.end - s.start == window);
            CHECK(s.start >= 0);
        }
    }
}

TEST_CASE("panel constructor rejects invalid assemblies") {
    auto dates = synth::monthly_dates(3);
    SUBCASE("non-finite cells") {
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(3, 2);
        r(1, 1) = std::numeric_limits<double>::quiet_NaN();
        CHECK(error_code_of([&] {
            ReturnPanel(dates, synth::default_assets(2), r);
        }) == Errc::MalformedRow);
    }
    SUBCASE("shape mismatch") {
        CHECK(error_code_of([&] {
            ReturnPanel(dates, synth::default_assets(2), Eigen::MatrixXd::Zero(2, 2));
        }) == Errc::MalformedRow);
    }
}
