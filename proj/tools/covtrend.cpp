#include "covtrend/backtest.hpp"
#include "covtrend/config.hpp"
#include "covtrend/csv.hpp"
#include "covtrend/error.hpp"
#include "covtrend/ingest.hpp"
#include "covtrend/pipeline.hpp"
#include "covtrend/preprocess.hpp"
#include "covtrend/riskmap.hpp"
#include "covtrend/screening.hpp"
#include "covtrend/svg_plot.hpp"
#include "covtrend/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace covtrend;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config_path;
    std::string regions = "*";
    std::string as_of;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string kind = "cases";
};

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

std::string file_stem(const RegionKey& region) {
    std::string out;
    for (char c : region.label()) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        out += keep ? c : '_';
    }
    return out;
}

Config load_config(const Globals& g) {
    try {
        return g.config_path.empty() ? Config{} : Config::load(g.config_path);
    } catch (const ContractError& e) {
        throw UsageError(e.what());
    }
}

std::optional<Date> as_of_date(const Globals& g) {
    if (g.as_of.empty()) {
        return std::nullopt;
    }
    try {
        return Date::parse_iso(g.as_of);
    } catch (const Error&) {
        throw UsageError("--as-of expects YYYY-MM-DD");
    }
}

std::vector<DailySeries> load_series(const std::string& path, const Globals& g, bool filter = true) {
    const std::string text = read_file(path);
    const SeriesKind kind = parse_series_kind(g.kind);
    auto all = ingest::looks_like_jhu(text) ? ingest::parse_jhu_wide(text, kind) : ingest::parse_long(text, kind);
    std::vector<DailySeries> out;
    const auto cut = as_of_date(g);
    for (auto& s : all) {
        if (filter && !pipeline::glob_match(g.regions, s.region.label())) {
            continue;
        }
        out.push_back(cut ? s.truncated(*cut) : std::move(s));
    }
    if (filter && out.empty()) {
        throw UsageError("no region matches '" + g.regions + "'");
    }
    return out;
}

int cmd_ingest(const Globals& g, const std::string& input, const std::string& output, const std::string& synthetic,
               int days, double level, double growth) {
    std::vector<DailySeries> series;
    if (!synthetic.empty()) {
        const auto start = Date::from_ymd(2020, 3, 1);
        const auto mu = synthetic == "flat" ? synthetic::flat_rate(level) : synthetic::exponential_rate(level, growth);
        series = synthetic::poisson_panel(synthetic, 5, start, days, mu, g.seed);
    } else {
        series = load_series(input, g);
    }
    write_file(output, ingest::write_long(series));
    return 0;
}

int cmd_preprocess(const Globals& g, const Config& config, const std::string& input, const std::string& output) {
    const auto series = load_series(input, g);
    std::vector<CleanSeries> clean(series.size());
    pipeline::parallel_for(series.size(), g.threads, [&](std::size_t i) {
        clean[i] = preprocess::preprocess_pipeline(series[i], config.preprocess);
    });
    std::string out = "region,date,raw,clean,provenance,trusted\n";
    for (std::size_t r = 0; r < series.size(); ++r) {
        const auto& c = clean[r];
        const std::string region = csv::escape(c.region.label());
        for (std::size_t i = 0; i < c.size(); ++i) {
            const auto& raw = series[r].values[i];
            out += region + "," + c.date_at(i).iso() + "," + (raw ? csv::format_shortest(*raw) : "") + "," +
                   csv::format_shortest(c.values[i]) + "," + std::string(to_string(c.provenance[i])) + "," +
                   (i <= c.forecast_anchor ? "true" : "false") + "\n";
        }
    }
    write_file(output, out);
    return 0;
}

int cmd_trend(const Globals& g, const Config& config, const std::string& input, const std::string& output) {
    const auto series = load_series(input, g);
    std::vector<CleanSeries> clean(series.size());
    std::vector<TrendEstimate> trends(series.size());
    pipeline::parallel_for(series.size(), g.threads, [&](std::size_t i) {
        clean[i] = preprocess::preprocess_pipeline(series[i], config.preprocess);
        trends[i] = trend::estimate_piecewise_trend(clean[i], config.trend);
    });
    std::string out = "region,date,clean,trend,outlier\n";
    for (std::size_t r = 0; r < series.size(); ++r) {
        const std::string region = csv::escape(clean[r].region.label());
        for (std::size_t i = 0; i < trends[r].values.size(); ++i) {
            out += region + "," + clean[r].date_at(i).iso() + "," + csv::format_shortest(clean[r].values[i]) + "," +
                   csv::format_fixed(trends[r].values[i], 4) + "," + (trends[r].outlier_mask[i] ? "1" : "0") + "\n";
        }
    }
    write_file(output, out);
    return 0;
}

int cmd_forecast(const Globals& g, const Config& config, const std::string& input, const std::string& out_dir,
                 bool csv_output, bool svg_output) {
    const auto series = load_series(input, g);
    std::vector<std::optional<pipeline::RegionForecast>> results(series.size());
    std::vector<std::string> failures(series.size());
    pipeline::parallel_for(series.size(), g.threads, [&](std::size_t i) {
        try {
            results[i] = pipeline::run_region_forecast(series[i], config);
        } catch (const InsufficientHistory& e) {
            failures[i] = e.what();
        }
    });
    int status = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!results[i]) {
            std::cerr << series[i].region.label() << ": insufficient history: " << failures[i] << "\n";
            status = 1;
            continue;
        }
        const auto& f = *results[i];
        const fs::path base = fs::path(out_dir) / file_stem(f.region);
        if (csv_output) {
            std::vector<ingest::HubForecast> hub;
            for (const auto& q : f.weekly) {
                hub.push_back({f.region.label(), f.kind, q});
            }
            write_file(base.string() + ".csv", ingest::write_hub_quantiles(hub, f.origin_date));
        }
        if (svg_output) {
            write_file(base.string() + ".svg", plot::render_forecast_svg(f));
        }
    }
    return status;
}

int cmd_backtest(const Globals& g, const Config& config, const std::string& input, backtest::BacktestConfig bt,
                 const std::string& start, const std::string& end, const std::string& vintage,
                 const std::string& scores_path, const std::string& strat_path) {
    try {
        bt.start_date = Date::parse_iso(start);
        bt.end_date = Date::parse_iso(end);
    } catch (const Error&) {
        throw UsageError("--start and --end expect YYYY-MM-DD");
    }
    bt.vintage_mode = vintage == "final" ? pipeline::VintageMode::final : pipeline::VintageMode::as_of;
    try {
        bt.validate();
    } catch (const ContractError& e) {
        throw UsageError(e.what());
    }
    const auto data = load_series(input, g);
    std::vector<DailySeries> truth;
    if (bt.ground_truth_snapshot) {
        Globals all = g;
        all.as_of.clear();
        truth = load_series(*bt.ground_truth_snapshot, all, false);
    }
    const auto report = backtest::run_backtest(data, truth, bt, config, g.threads);
    write_file(scores_path, backtest::write_scores_csv(report));
    write_file(strat_path, backtest::write_stratification_csv(report));
    std::cerr << "scored " << data.size() << " regions; skipped origins: " << report.skipped_origins << "\n";
    return 0;
}

int cmd_screen(const Globals& g, const Config& config, const std::string& input, const std::string& output) {
    const auto series = load_series(input, g);
    std::vector<screening::ScreeningReport> reports(series.size());
    pipeline::parallel_for(series.size(), g.threads,
                           [&](std::size_t i) { reports[i] = screening::measure(series[i], config.screening); });
    write_file(output, screening::write_screening_csv(screening::select_regions(reports, config.screening)));
    return 0;
}

int cmd_riskmap(const Globals& g, const Config& config, const std::string& input, const std::string& population_path,
                const std::string& tests_path, const std::string& reff_path, const std::string& output) {
    const auto series = load_series(input, g);
    const auto population = riskmap::parse_population_csv(read_file(population_path));
    const auto tests = tests_path.empty() ? std::map<std::string, double>{} : riskmap::parse_tests_csv(read_file(tests_path));
    std::vector<std::optional<pipeline::RegionForecast>> results(series.size());
    pipeline::parallel_for(series.size(), g.threads, [&](std::size_t i) {
        try {
            results[i] = pipeline::run_region_forecast(series[i], config);
        } catch (const InsufficientHistory&) {
        }
    });
    std::vector<riskmap::RiskRow> rows;
    int status = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string label = series[i].region.label();
        if (!results[i]) {
            std::cerr << label << ": insufficient history\n";
            status = 1;
            continue;
        }
        const auto reff = reff_path.empty() ? std::map<std::string, double>{}
                                            : riskmap::parse_reff_csv(read_file(reff_path), results[i]->origin_date);
        riskmap::RiskInput in;
        in.region = series[i].region;
        if (auto it = population.find(label); it != population.end()) {
            in.region.population = it->second;
        }
        if (auto it = tests.find(label); it != tests.end()) {
            in.tests_per_million = it->second;
        }
        if (auto it = reff.find(label); it != reff.end()) {
            in.r_eff = it->second;
        }
        in.forecast_weekly_cases = results[i]->weekly.front().point;
        const auto result = riskmap::classify(in, config.riskmap);
        if (result.missing_population) {
            std::cerr << label << ": no population, classified grey\n";
        }
        if (result.missing_r_eff) {
            std::cerr << label << ": no R-eff at high incidence, classified red\n";
        }
        rows.push_back({label, result, in.r_eff});
    }
    write_file(output, riskmap::write_riskmap_csv(rows));
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trend estimation and short-term forecasting of daily case counts"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    bool print_config = false;
    app.add_option("--config", g.config_path, "Flat key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--regions", g.regions, "Region label glob (default *)");
    app.add_option("--as-of", g.as_of, "Ignore data dated after this day (YYYY-MM-DD)");
    app.add_option("--seed", g.seed, "Seed for synthetic data");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 256));
    app.add_option("--kind", g.kind, "cases or deaths")->check(CLI::IsMember({"cases", "deaths"}));
    app.add_flag("--print-config", print_config, "Print the effective configuration to stderr");

    std::string input;
    std::string output;

    auto* ingest_cmd = app.add_subcommand("ingest", "Convert JHU wide or long CSV into the long format");
    std::string synthetic_kind;
    int synthetic_days = 126;
    double synthetic_level = 100.0;
    double synthetic_growth = 1.05;
    ingest_cmd->add_option("--input", input, "Input CSV")->check(CLI::ExistingFile);
    ingest_cmd->add_option("--output,-o", output, "Output long CSV")->required();
    ingest_cmd->add_option("--synthetic", synthetic_kind, "Generate a seeded Poisson panel instead: flat or growth")
        ->check(CLI::IsMember({"flat", "growth"}));
    ingest_cmd->add_option("--days", synthetic_days, "Synthetic series length")->check(CLI::Range(1, 100000));
    ingest_cmd->add_option("--level", synthetic_level, "Synthetic daily mean at day 0");
    ingest_cmd->add_option("--growth", synthetic_growth, "Synthetic weekly growth factor");

    auto* pre_cmd = app.add_subcommand("preprocess", "Clean series: negatives, zero runs, trailing missing days");
    auto* trend_cmd = app.add_subcommand("trend", "Piecewise robust trend per region");
    for (auto* cmd : {pre_cmd, trend_cmd}) {
        cmd->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
        cmd->add_option("--output,-o", output, "Output CSV")->required();
    }

    auto* forecast_cmd = app.add_subcommand("forecast", "Hub quantile CSV and SVG plot per region");
    auto* plot_cmd = app.add_subcommand("plot", "SVG plot per region");
    for (auto* cmd : {forecast_cmd, plot_cmd}) {
        cmd->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out-dir", output, "Output directory")->required();
    }
    bool no_plot = false;
    forecast_cmd->add_flag("--no-plot", no_plot, "Skip SVG output");

    auto* backtest_cmd = app.add_subcommand("backtest", "Rolling-origin evaluation against the baseline");
    backtest::BacktestConfig bt;
    std::string start;
    std::string end;
    std::string vintage = "as_of";
    std::string ground_truth;
    std::string scores_path = "scores.csv";
    std::string strat_path = "stratification.csv";
    backtest_cmd->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
    backtest_cmd->add_option("--start", start, "First origin (YYYY-MM-DD)")->required();
    backtest_cmd->add_option("--end", end, "Last origin (YYYY-MM-DD)")->required();
    backtest_cmd->add_option("--ground-truth", ground_truth, "Later snapshot used as truth")->check(CLI::ExistingFile);
    backtest_cmd->add_option("--vintage", vintage, "as_of or final")->check(CLI::IsMember({"as_of", "final"}));
    backtest_cmd->add_option("--daily-horizons", bt.daily_horizons, "Daily horizons in 1..14")->delimiter(',');
    backtest_cmd->add_option("--weekly-horizons", bt.weekly_horizons, "Weekly horizons in {1,2}")->delimiter(',');
    backtest_cmd->add_flag("--force-baseline", bt.force_baseline, "Score the baseline against itself");
    backtest_cmd->add_option("--scores", scores_path, "Per-region score CSV");
    backtest_cmd->add_option("--stratification", strat_path, "Growth-rate stratification CSV");

    auto* screen_cmd = app.add_subcommand("screen", "Apply the region selection rules to raw series");
    screen_cmd->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
    screen_cmd->add_option("--output,-o", output, "screening.csv path")->required();

    auto* risk_cmd = app.add_subcommand("riskmap", "Classify regions from forecast incidence, R-eff and testing");
    std::string population_path;
    std::string tests_path;
    std::string reff_path;
    risk_cmd->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
    risk_cmd->add_option("--population", population_path, "region,population")->required()->check(CLI::ExistingFile);
    risk_cmd->add_option("--tests", tests_path, "region,tests_per_million")->check(CLI::ExistingFile);
    risk_cmd->add_option("--reff", reff_path, "region,date,r_eff")->check(CLI::ExistingFile);
    risk_cmd->add_option("--output,-o", output, "riskmap.csv path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ingest_cmd && input.empty() && synthetic_kind.empty()) {
            throw UsageError("ingest needs --input or --synthetic");
        }
        const Config config = load_config(g);
        if (print_config) {
            std::cerr << config.dump();
        }
        if (*ingest_cmd) {
            return cmd_ingest(g, input, output, synthetic_kind, synthetic_days, synthetic_level, synthetic_growth);
        }
        if (*pre_cmd) {
            return cmd_preprocess(g, config, input, output);
        }
        if (*trend_cmd) {
            return cmd_trend(g, config, input, output);
        }
        if (*forecast_cmd) {
            return cmd_forecast(g, config, input, output, true, !no_plot);
        }
        if (*plot_cmd) {
            return cmd_forecast(g, config, input, output, false, true);
        }
        if (*backtest_cmd) {
            if (!ground_truth.empty()) {
                bt.ground_truth_snapshot = ground_truth;
            }
            return cmd_backtest(g, config, input, bt, start, end, vintage, scores_path, strat_path);
        }
        if (*screen_cmd) {
            return cmd_screen(g, config, input, output);
        }
        if (*risk_cmd) {
            return cmd_riskmap(g, config, input, population_path, tests_path, reff_path, output);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
