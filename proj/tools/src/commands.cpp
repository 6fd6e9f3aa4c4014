#include "sampleahead/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <ostream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "sampleahead/mnist_task.hpp"

namespace sampleahead::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixed(double value, int digits) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, digits);
    return ec == std::errc() ? std::string(buf, p) : format_double(value);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(std::move(line));
    }
    return out;
}

// Loads a config and checks that the data it names is on disk, so data
// problems surface before any run starts.
RunConfig load(const fs::path& path) {
    RunConfig cfg = parse_config(path);
    if (const auto* m = std::get_if<MnistTaskSpec>(&cfg.loop.generator)) {
        const auto files = MnistFiles::in(m->data_dir);
        if (!fs::is_directory(m->data_dir)) throw DataError("mnist data directory not found: " + m->data_dir.string());
        for (const auto& f : {files.train_images, files.train_labels}) {
            if (!fs::exists(f)) throw DataError("missing mnist file " + f.string());
        }
    }
    return cfg;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ContractError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const DivergenceError& e) {
        err << "diverged: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void write_atomic(const fs::path& file, std::string_view content) {
    fs::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, file, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + file.string());
    }
}

std::string epochs_csv(const RunReport& report) {
    std::string out = "epoch,loss,probe_error,val_error,wall_ms\n";
    for (const auto& e : report.epochs) {
        out += std::to_string(e.epoch) + ',' + format_double(e.mean_loss) + ',' +
               (e.probe_error ? format_double(*e.probe_error) : std::string()) + ',' +
               format_double(e.validation_error) + ',' + format_double(e.wall_ms) + '\n';
    }
    return out;
}

std::string distribution_csv(const RunReport& report) {
    std::string out = "epoch,bucket,p,d\n";
    for (const auto& e : report.epochs) {
        const std::string epoch = std::to_string(e.epoch) + ',';
        for (std::size_t k = 0; k < e.distribution.size(); ++k) {
            out += epoch + std::to_string(k) + ',' + format_double(e.distribution[k]) + ',';
            if (e.difficulty) out += format_double((*e.difficulty)[k]);
            out += '\n';
        }
    }
    return out;
}

std::string report_json(const RunConfig& config, const RunReport& report) {
    json j;
    j["experiment"] = config.experiment;
    j["mode"] = std::string(to_string(config.loop.mode));
    j["seed"] = config.loop.seed;
    j["partition"] = report.partition_descriptor;
    j["bucket_count"] = report.prior.size();
    j["epochs"] = report.epochs.size();
    j["iterations"] = report.iterations;
    j["diverged_at"] = report.diverged_at ? json(*report.diverged_at) : json(nullptr);
    j["test_error"] = number_or_null(report.test_error);
    j["final_validation_error"] =
        report.epochs.empty() ? json(nullptr) : number_or_null(report.epochs.back().validation_error);
    json buckets = json::array();
    for (double v : report.test_bucket_error) buckets.push_back(number_or_null(v));
    j["test_bucket_error"] = std::move(buckets);
    j["pool_fallbacks"] = report.pool_fallbacks;
    return j.dump(2) + '\n';
}

int cmd_run(const fs::path& config_path, const RunOverrides& overrides, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunConfig cfg = load(config_path);
        if (overrides.seed) cfg.seeds = {*overrides.seed};
        cfg.loop.seed = cfg.seeds.front();
        if (overrides.out) cfg.output_dir = *overrides.out;

        const RunReport report = run(cfg.loop, [&err](const std::string& line) { err << line << '\n'; });

        fs::create_directories(cfg.output_dir);
        const fs::path dir = cfg.output_dir;
        write_atomic(dir / "config.snapshot", serialize_config(cfg));
        write_atomic(dir / "epochs.csv", epochs_csv(report));
        write_atomic(dir / "distribution.csv", distribution_csv(report));
        write_atomic(dir / "report.json", report_json(cfg, report));
        if (!report.diverged_at) {
            std::ostringstream blob;
            save_checkpoint(blob, report.classifier, report.iterations);
            write_atomic(dir / "classifier.ckpt", blob.str());
        }

        out << cfg.experiment << ": mode=" << to_string(cfg.loop.mode) << " seed=" << cfg.loop.seed
            << " epochs=" << report.epochs.size() << " iterations=" << report.iterations;
        if (report.diverged_at) {
            out << " diverged_at=" << *report.diverged_at << " out=" << dir.string() << '\n';
            return int(kExitDivergence);
        }
        out << " test_error=" << fixed(report.test_error, 4) << " out=" << dir.string() << '\n';
        return int(kExitOk);
    });
}

int cmd_compare(const std::vector<fs::path>& paths, const std::vector<std::uint64_t>& seeds_in,
                const std::optional<fs::path>& out_dir, std::size_t jobs, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (paths.size() < 2) throw ConfigError("", 0, "compare needs at least two configs");
        std::vector<RunConfig> configs;
        for (const auto& p : paths) configs.push_back(load(p));

        std::vector<std::uint64_t> seeds = seeds_in.empty() ? configs.front().seeds : seeds_in;
        if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
            throw ConfigError("seeds", 0, "seeds must be distinct");
        }
        std::vector<LoopConfig> loops;
        for (const auto& c : configs) loops.push_back(c.loop);

        const ComparisonReport cmp = compare(loops, seeds, jobs, [&err](const std::string& l) { err << l << '\n'; });

        const fs::path dir = out_dir.value_or(fs::path("compare"));
        fs::create_directories(dir);

        std::string csv = "config,seed,final_error\n";
        for (std::size_t i = 0; i < configs.size(); ++i) {
            for (std::size_t j = 0; j < seeds.size(); ++j) {
                csv += csv_field(configs[i].experiment) + ',' + std::to_string(seeds[j]) + ',' +
                       (cmp.errors[i][j] ? format_double(*cmp.errors[i][j]) : std::string()) + '\n';
            }
        }

        json summary;
        summary["seeds"] = seeds;
        json cfgs = json::array();
        for (std::size_t i = 0; i < configs.size(); ++i) {
            json failures = json::object();
            for (std::size_t j = 0; j < seeds.size(); ++j) {
                if (!cmp.failures[i][j].empty()) failures[std::to_string(seeds[j])] = cmp.failures[i][j];
            }
            cfgs.push_back({{"name", configs[i].experiment},
                            {"path", paths[i].string()},
                            {"mode", std::string(to_string(configs[i].loop.mode))},
                            {"mean", number_or_null(cmp.means[i])},
                            {"std", number_or_null(cmp.stddevs[i])},
                            {"failures", std::move(failures)}});
        }
        summary["configs"] = std::move(cfgs);
        json pairs = json::array();
        for (const auto& p : cmp.pairs) {
            json entry = {{"first", configs[p.first].experiment},
                          {"second", configs[p.second].experiment},
                          {"mean_difference", number_or_null(p.mean_difference)},
                          {"zero_variance", p.zero_variance}};
            entry["t"] = p.test ? number_or_null(p.test->t) : json(nullptr);
            entry["p_value"] = p.test ? number_or_null(p.test->p_value) : json(nullptr);
            entry["skipped"] = p.skipped_reason.empty() ? json(nullptr) : json(p.skipped_reason);
            pairs.push_back(std::move(entry));
        }
        summary["pairs"] = std::move(pairs);

        write_atomic(dir / "compare.csv", csv);
        write_atomic(dir / "compare_summary.json", summary.dump(2) + '\n');

        bool failed = false;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            out << configs[i].experiment << ": mean=" << fixed(cmp.means[i], 4) << " std=" << fixed(cmp.stddevs[i], 4)
                << '\n';
            for (const auto& f : cmp.failures[i]) failed = failed || !f.empty();
        }
        for (const auto& p : cmp.pairs) {
            out << configs[p.first].experiment << " vs " << configs[p.second].experiment << ": ";
            if (!p.skipped_reason.empty()) out << "skipped (" << p.skipped_reason << ")\n";
            else if (p.zero_variance) out << "zero variance\n";
            else if (p.test) out << "t=" << fixed(p.test->t, 3) << " p=" << format_double(p.test->p_value) << '\n';
            else out << "single seed, no test\n";
        }
        return int(failed ? kExitDivergence : kExitOk);
    });
}

int cmd_report(const fs::path& dir, std::ostream& out, std::ostream& err) {
    for (const char* name : {"config.snapshot", "epochs.csv", "distribution.csv", "report.json"}) {
        if (!fs::exists(dir / name)) {
            err << "incomplete run directory: " << (dir / name).string() << " is missing\n";
            return kExitData;
        }
    }
    return guarded(err, [&] {
        RunConfig cfg;
        try {
            cfg = parse_config(dir / "config.snapshot", false);
        } catch (const ConfigError& e) {
            throw DataError(std::string("unreadable config.snapshot: ") + e.what());
        }
        const BucketPartition partition = partition_for(cfg.loop.generator);
        const std::size_t K = partition.bucket_count();

        const auto dist = lines_of(read_file(dir / "distribution.csv"));
        if (dist.empty() || dist.front() != "epoch,bucket,p,d") throw DataError("distribution.csv has an unexpected header");

        struct Row {
            std::string p, d;
        };
        std::map<std::size_t, std::vector<Row>> by_epoch;
        for (std::size_t i = 1; i < dist.size(); ++i) {
            if (dist[i].empty()) continue;
            const auto f = split(dist[i], ',');
            std::size_t epoch = 0, bucket = 0;
            if (f.size() != 4 || std::from_chars(f[0].data(), f[0].data() + f[0].size(), epoch).ec != std::errc() ||
                std::from_chars(f[1].data(), f[1].data() + f[1].size(), bucket).ec != std::errc() || bucket >= K) {
                throw DataError("distribution.csv line " + std::to_string(i + 1) + " is malformed");
            }
            auto& rows = by_epoch[epoch];
            if (bucket != rows.size()) throw DataError("distribution.csv buckets out of order at line " + std::to_string(i + 1));
            rows.push_back({f[2], f[3]});
        }
        for (const auto& [epoch, rows] : by_epoch) {
            if (rows.size() != K) throw DataError("epoch " + std::to_string(epoch) + " is missing buckets");
        }

        const auto& axes = partition.space().axes();
        std::string heat = "epoch,bucket";
        for (const auto& a : axes) heat += ',' + csv_field(a.name());
        heat += ",p,d\n";
        for (const auto& [epoch, rows] : by_epoch) {
            for (std::size_t k = 0; k < K; ++k) {
                heat += std::to_string(epoch) + ',' + std::to_string(k);
                for (std::size_t b : partition.bins_of(k)) heat += ',' + std::to_string(b);
                heat += ',' + rows[k].p + ',' + rows[k].d + '\n';
            }
        }

        const auto epochs = lines_of(read_file(dir / "epochs.csv"));
        if (epochs.empty() || epochs.front() != "epoch,loss,probe_error,val_error,wall_ms") {
            throw DataError("epochs.csv has an unexpected header");
        }
        json report;
        try {
            report = json::parse(read_file(dir / "report.json"));
        } catch (const json::exception& e) {
            throw DataError(std::string("report.json: ") + e.what());
        }

        std::ostringstream text;
        text << "experiment  " << cfg.experiment << "\nmode        " << to_string(cfg.loop.mode) << "\nseed        "
             << cfg.loop.seed << "\nbuckets     " << K << "\n\n";
        text << "epoch      loss  probe_err    val_err      p_min      p_max  hardest\n";
        for (std::size_t i = 1; i < epochs.size(); ++i) {
            if (epochs[i].empty()) continue;
            const auto f = split(epochs[i], ',');
            if (f.size() != 5) throw DataError("epochs.csv line " + std::to_string(i + 1) + " is malformed");
            std::size_t epoch = 0;
            std::from_chars(f[0].data(), f[0].data() + f[0].size(), epoch);
            auto cell = [](const std::string& s) {
                double v = 0.0;
                if (s.empty() || std::from_chars(s.data(), s.data() + s.size(), v).ec != std::errc()) return std::string("-");
                return fixed(v, 4);
            };
            double pmin = 1.0, pmax = 0.0, dmax = -1.0;
            std::string hardest = "-";
            if (auto it = by_epoch.find(epoch); it != by_epoch.end()) {
                for (std::size_t k = 0; k < K; ++k) {
                    double p = 0.0, d = 0.0;
                    const auto& r = it->second[k];
                    std::from_chars(r.p.data(), r.p.data() + r.p.size(), p);
                    pmin = std::min(pmin, p);
                    pmax = std::max(pmax, p);
                    if (!r.d.empty() && std::from_chars(r.d.data(), r.d.data() + r.d.size(), d).ec == std::errc() &&
                        d > dmax) {
                        dmax = d;
                        hardest = std::to_string(k);
                    }
                }
            }
            auto pad = [](std::string s, std::size_t w) { return std::string(w > s.size() ? w - s.size() : 0, ' ') + s; };
            text << pad(f[0], 5) << pad(cell(f[1]), 10) << pad(cell(f[2]), 11) << pad(cell(f[3]), 11)
                 << pad(fixed(pmin, 6), 11) << pad(fixed(pmax, 6), 11) << pad(hardest, 9) << '\n';
        }
        text << "\ntest_error  "
             << (report.contains("test_error") && report["test_error"].is_number()
                     ? fixed(report["test_error"].get<double>(), 6)
                     : std::string("-"))
             << '\n';

        write_atomic(dir / "heatmap.csv", heat);
        write_atomic(dir / "summary.txt", text.str());
        out << "wrote " << (dir / "heatmap.csv").string() << " (" << by_epoch.size() * K << " rows) and "
            << (dir / "summary.txt").string() << '\n';
        return int(kExitOk);
    });
}

}  // namespace sampleahead::cli
