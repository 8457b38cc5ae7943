#include "qtunnel/cli_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <CLI11.hpp>
#include <zlib.h>

namespace qtunnel::io {

namespace {

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string format_double(double x) {
    std::array<char, 64> buf;
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

void write_density_csv(const std::string& path,
                       const std::vector<std::pair<std::string, dvec>>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_density_csv: no columns");
    const std::size_t n = columns.front().second.size();
    for (const auto& [label, values] : columns) {
        if (values.size() != n) {
            throw std::invalid_argument("write_density_csv: column '" + label +
                                        "' length mismatch");
        }
    }
    std::string out = "site";
    for (const auto& [label, values] : columns) out += "," + label;
    out += "\n";
    for (std::size_t j = 0; j < n; ++j) {
        out += std::to_string(j);
        for (const auto& [label, values] : columns) out += "," + format_double(values[j]);
        out += "\n";
    }
    write_file(path, out);
}

void write_summary_csv(const std::string& path, const SweepTable& table) {
    std::vector<SweepRow> rows = table.rows;
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        if (a.width_d != b.width_d) return a.width_d < b.width_d;
        return a.height_h < b.height_h;
    });
    std::string out =
        "sigma,d,h,snapshot_time,max_free,max_transmitted,shift,transmitted_norm,flags\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.sigma);
        out += "," + std::to_string(r.width_d);
        out += "," + format_double(r.height_h);
        out += "," + format_double(r.snapshot_time);
        out += "," + format_double(r.max_free);
        out += "," + format_double(r.max_transmitted);
        out += "," + format_double(r.shift);
        out += "," + format_double(r.transmitted_norm);
        out += ",";
        for (std::size_t i = 0; i < r.flags.size(); ++i) {
            if (i > 0) out += ";";
            out += r.flags[i];
        }
        out += "\n";
    }
    write_file(path, out);
}

void write_timeseries_csv(const std::string& path, const RunRecord& record) {
    std::string out = "time,max_free,max_transmitted,shift,transmitted_norm,reflected_norm\n";
    for (std::size_t i = 0; i < record.samples(); ++i) {
        out += format_double(record.times[i]);
        out += "," + format_double(record.max_free[i]);
        out += "," + format_double(record.max_transmitted[i]);
        out += "," + format_double(record.shift[i]);
        out += "," + format_double(record.transmitted_norm[i]);
        out += "," + format_double(record.reflected_norm[i]);
        out += "\n";
    }
    write_file(path, out);
}

std::string crc32_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for checksum: " + path);
    uLong crc = crc32(0L, Z_NULL, 0);
    std::array<char, 65536> buf;
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0) {
            crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()),
                        static_cast<uInt>(got));
        }
    }
    char hex[16];
    std::snprintf(hex, sizeof hex, "%08lx", static_cast<unsigned long>(crc));
    return hex;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["grid-size"] = cfg.n_sites;
    j["x0"] = cfg.x0;
    j["sigma"] = cfg.sigma;
    j["k0"] = cfg.k0;
    j["dt"] = cfg.dt;
    j["barrier-start"] = cfg.barrier_start;
    j["d"] = cfg.width_d;
    j["h"] = cfg.height_h;
    j["d-list"] = cfg.d_list;
    j["h-list"] = cfg.h_list;
    j["sigma-list"] = cfg.sigma_list;
    j["steps"] = cfg.steps;
    j["snapshot-time"] = cfg.snapshot_time;
    j["clear-sigmas"] = cfg.clear_sigmas;
    j["stride"] = cfg.stride;
    j["out"] = cfg.out_dir;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "grid-size", "x0",     "sigma",      "k0",    "dt",            "barrier-start",
        "d",         "h",      "d-list",     "h-list", "sigma-list",   "steps",
        "snapshot-time", "clear-sigmas", "stride", "out"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw std::invalid_argument("config: unknown field '" + it.key() + "'");
        }
    }
    ExperimentConfig cfg;
    if (j.contains("grid-size")) cfg.n_sites = j.at("grid-size").get<std::size_t>();
    if (j.contains("x0")) cfg.x0 = j.at("x0").get<double>();
    if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
    if (j.contains("k0")) cfg.k0 = j.at("k0").get<double>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("barrier-start")) cfg.barrier_start = j.at("barrier-start").get<std::size_t>();
    if (j.contains("d")) cfg.width_d = j.at("d").get<std::size_t>();
    if (j.contains("h")) cfg.height_h = j.at("h").get<double>();
    if (j.contains("d-list")) cfg.d_list = j.at("d-list").get<std::vector<std::size_t>>();
    if (j.contains("h-list")) cfg.h_list = j.at("h-list").get<std::vector<double>>();
    if (j.contains("sigma-list")) cfg.sigma_list = j.at("sigma-list").get<std::vector<double>>();
    if (j.contains("steps")) cfg.steps = j.at("steps").get<std::size_t>();
    if (j.contains("snapshot-time")) cfg.snapshot_time = j.at("snapshot-time").get<double>();
    if (j.contains("clear-sigmas")) cfg.clear_sigmas = j.at("clear-sigmas").get<double>();
    if (j.contains("stride")) cfg.stride = j.at("stride").get<std::size_t>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    return cfg;
}

void write_config_echo(const std::string& path, const ExperimentConfig& cfg) {
    write_file(path, config_to_json(cfg).dump(2) + "\n");
}

void write_run_manifest(const std::string& path, const std::string& subcommand,
                        const ExperimentConfig& cfg, std::size_t resolved_steps,
                        const std::vector<std::string>& files) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["timestamp"] = utc_timestamp();
    j["subcommand"] = subcommand;
    j["config"] = config_to_json(cfg);
    j["resolved"] = {{"steps", resolved_steps},
                     {"snapshot-time", static_cast<double>(resolved_steps) * cfg.dt}};
    nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
    const std::string dir = path.find('/') != std::string::npos
                                ? path.substr(0, path.rfind('/') + 1)
                                : std::string{};
    for (const std::string& f : files) outputs[f] = "crc32:" + crc32_file_hex(dir + f);
    j["outputs"] = outputs;
    write_file(path, j.dump(2) + "\n");
}

ParseOutcome parse_invocation(const std::vector<std::string>& args) {
    ExperimentConfig cfg;

    // Config file first: flags parsed afterwards override its values.
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string value;
        if (args[i] == "--config" && i + 1 < args.size()) {
            value = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            value = args[i].substr(9);
        } else {
            continue;
        }
        std::ifstream in(value);
        if (!in) return {1, "config: cannot open '" + value + "'", std::nullopt};
        try {
            cfg = config_from_json(nlohmann::json::parse(in));
        } catch (const std::exception& e) {
            return {1, std::string("config: ") + e.what(), std::nullopt};
        }
        break;
    }

    CLI::App app{"1D wave-packet tunneling simulator"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (fields named like the flags)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--grid-size", cfg.n_sites, "lattice sites")
            ->check(CLI::Range(std::size_t{3}, std::size_t{1} << 30));
        sub->add_option("--x0", cfg.x0, "initial packet center (sites)");
        sub->add_option("--sigma", cfg.sigma, "initial density std (sites)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--k0", cfg.k0, "wave number (1/site)")->check(CLI::NonNegativeNumber);
        sub->add_option("--dt", cfg.dt, "time step")->check(CLI::PositiveNumber);
        sub->add_option("--barrier-start", cfg.barrier_start, "first barrier site");
        sub->add_option("--steps", cfg.steps, "step count (overrides the snapshot rule)");
        sub->add_option("--snapshot-time", cfg.snapshot_time, "snapshot time (overridden by --steps)");
        sub->add_option("--clear-sigmas", cfg.clear_sigmas,
                        "initial widths the slowest packet clears the barrier by")
            ->check(CLI::PositiveNumber);
        sub->add_option("--stride", cfg.stride, "observer stride (steps)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out_dir, "output directory")->envname("QTUNNEL_OUT");
        sub->add_option("--config", config_path, "JSON config file");
    };

    CLI::App* single = app.add_subcommand("single-run", "one paired (barrier, free) run");
    single->add_option("--d", cfg.width_d, "barrier width (sites)");
    single->add_option("--h", cfg.height_h, "barrier height ratio V0/E0")
        ->check(CLI::NonNegativeNumber);

    CLI::App* snapshot = app.add_subcommand("snapshot", "fixed height, sweep barrier widths");
    snapshot->add_option("--d-list", cfg.d_list, "barrier widths")->delimiter(',');
    snapshot->add_option("--h", cfg.height_h, "barrier height ratio")
        ->check(CLI::NonNegativeNumber);

    CLI::App* hsweep = app.add_subcommand("height-sweep", "fixed width, sweep barrier heights");
    hsweep->add_option("--h-list", cfg.h_list, "barrier height ratios")->delimiter(',');
    hsweep->add_option("--d", cfg.width_d, "barrier width (sites)");

    CLI::App* wscan = app.add_subcommand("width-scan", "cross product of widths and packet widths");
    wscan->add_option("--d-list", cfg.d_list, "barrier widths")->delimiter(',');
    wscan->add_option("--sigma-list", cfg.sigma_list, "initial packet widths")->delimiter(',');
    wscan->add_option("--h", cfg.height_h, "barrier height ratio")
        ->check(CLI::NonNegativeNumber);

    for (CLI::App* sub : {single, snapshot, hsweep, wscan}) add_common(sub);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {0, app.help(), std::nullopt};
    } catch (const CLI::ParseError& e) {
        return {1, std::string(e.what()) + "\n\n" + app.help(), std::nullopt};
    }

    CliInvocation inv;
    inv.subcommand = app.get_subcommands().front()->get_name();
    inv.cfg = cfg;
    if (inv.cfg.out_dir.empty()) inv.cfg.out_dir = "qtunnel-" + inv.subcommand;
    return {0, "", std::move(inv)};
}

} // namespace qtunnel::io
