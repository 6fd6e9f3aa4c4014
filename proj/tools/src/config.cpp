#include "sampleahead/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace sampleahead::cli {

ConfigError::ConfigError(std::string key, std::size_t line, const std::string& what, const std::string& file)
    : Error((file.empty() ? std::string() : file + ": ") +
            (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
            (key.empty() ? std::string() : "'" + key + "': ") + what),
      key_(std::move(key)),
      line_(line),
      detail_(what) {}

namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Drops a trailing comment: '#' at the start or after whitespace, outside quotes.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '\\') ++i;
            else if (c == '"') quoted = false;
        } else if (c == '"') {
            quoted = true;
        } else if (c == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

class Reader {
public:
    Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::size_t line(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError(key, line(key), what);
    }

    std::string text(const std::string& key) const {
        const auto& raw = entries_.at(key).value;
        if (raw.empty() || raw.front() != '"') return raw;
        std::string out;
        std::size_t i = 1;
        for (; i < raw.size() && raw[i] != '"'; ++i) {
            if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
            out += raw[i];
        }
        if (i != raw.size() - 1) fail(key, "unterminated or malformed quoted string");
        return out;
    }

    std::uint64_t unsigned_integer(const std::string& key) const {
        const auto s = text(key);
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
            fail(key, "expected a non-negative integer, got '" + s + "'");
        }
        return v;
    }

    double real(const std::string& key) const { return parse_real(key, text(key)); }

    bool boolean(const std::string& key) const {
        const auto s = text(key);
        if (s == "true") return true;
        if (s == "false") return false;
        fail(key, "expected true or false, got '" + s + "'");
    }

    std::vector<std::string> list(const std::string& key) const {
        const std::string raw = text(key);
        std::string_view s = trim(raw);
        if (!s.empty() && s.front() == '[') {
            if (s.back() != ']') fail(key, "unbalanced '['");
            s = trim(s.substr(1, s.size() - 2));
        }
        std::vector<std::string> items;
        if (s.empty()) return items;
        std::size_t start = 0;
        while (true) {
            const auto comma = s.find(',', start);
            const auto item = trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (item.empty()) fail(key, "empty list element");
            items.emplace_back(item);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return items;
    }

    std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : list(key)) out.push_back(parse_real(key, item));
        return out;
    }

    std::vector<std::uint64_t> unsigned_list(const std::string& key) const {
        std::vector<std::uint64_t> out;
        for (const auto& item : list(key)) {
            std::uint64_t v = 0;
            auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc() || p != item.data() + item.size()) {
                fail(key, "expected a list of non-negative integers, got '" + item + "'");
            }
            out.push_back(v);
        }
        return out;
    }

private:
    double parse_real(const std::string& key, const std::string& s) const {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
            fail(key, "expected a finite number, got '" + s + "'");
        }
        return v;
    }

    std::map<std::string, Entry> entries_;
};

const std::set<std::string>& common_keys() {
    static const std::set<std::string> keys = {
        "experiment", "generator", "mode", "seeds", "space.descriptor",
        "sampler.alpha", "sampler.beta",
        "loop.total_iterations", "loop.iterations_per_epoch", "loop.warmup_iterations",
        "probe.per_bucket", "probe.mode", "probe.initial_difficulty",
        "train.architecture", "train.hidden", "train.lr", "train.lr_gamma", "train.lr_power",
        "train.weight_decay", "train.batch_size", "train.real_per_batch", "train.synth_per_batch",
        "eval.validation_size", "eval.test_size", "pool.size",
        "output.dir", "output.timing",
    };
    return keys;
}

const std::set<std::string>& gaussian_keys() {
    static const std::set<std::string> keys = {
        "gaussian.classes", "gaussian.sectors", "gaussian.radius", "gaussian.sector_noise", "gaussian.geometry_seed",
    };
    return keys;
}

const std::set<std::string>& mnist_keys() {
    static const std::set<std::string> keys = {
        "mnist.data_dir", "mnist.rotation", "mnist.scale_lo", "mnist.scale_hi", "mnist.shift",
        "mnist.shear", "mnist.train_limit", "mnist.test_limit",
    };
    return keys;
}

std::map<std::string, Entry> tokenize(std::string_view text) {
    std::map<std::string, Entry> entries;
    std::string section;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++number;

        const auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("", number, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("", number, "expected 'key = value'");
        const auto name = trim(line.substr(0, eq));
        if (name.empty()) throw ConfigError("", number, "missing key before '='");
        std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);

        const bool known = common_keys().count(key) || gaussian_keys().count(key) || mnist_keys().count(key);
        if (!known) throw ConfigError(key, number, "unknown key");
        if (entries.count(key)) {
            throw ConfigError(key, number, "duplicate key (first set on line " + std::to_string(entries[key].line) + ")");
        }
        entries[key] = Entry{std::string(trim(line.substr(eq + 1))), number};
    }
    return entries;
}

template <class T>
void set_if(const Reader& r, const std::string& key, T& target, T (Reader::*get)(const std::string&) const) {
    if (r.has(key)) target = (r.*get)(key);
}

void set_size(const Reader& r, const std::string& key, std::size_t& target) {
    if (r.has(key)) target = static_cast<std::size_t>(r.unsigned_integer(key));
}

void positive(const Reader& r, const std::string& key, std::size_t value) {
    if (value == 0) r.fail(key, "must be positive");
}

}  // namespace

RunConfig parse_config_text(std::string_view text, bool apply_env) {
    const Reader r(tokenize(text));
    RunConfig cfg;
    LoopConfig& loop = cfg.loop;

    for (const char* required : {"experiment", "generator"}) {
        if (!r.has(required)) throw ConfigError(required, 0, "missing required key");
    }
    cfg.experiment = r.text("experiment");
    if (cfg.experiment.empty()) r.fail("experiment", "must not be empty");

    const std::string generator = r.text("generator");
    if (generator != "gaussian" && generator != "mnist") {
        r.fail("generator", "expected gaussian or mnist, got '" + generator + "'");
    }
    const auto& foreign = generator == "gaussian" ? mnist_keys() : gaussian_keys();
    for (const auto& key : foreign) {
        if (r.has(key)) r.fail(key, "not valid with generator = " + generator);
    }

    if (r.has("mode")) {
        const auto m = parse_mode(r.text("mode"));
        if (!m) r.fail("mode", "expected adaptive, uniform-baseline, frozen-distribution or fixed-pool");
        loop.mode = *m;
    }
    if (r.has("seeds")) {
        cfg.seeds = r.unsigned_list("seeds");
        if (cfg.seeds.empty()) r.fail("seeds", "needs at least one seed");
        const std::set<std::uint64_t> distinct(cfg.seeds.begin(), cfg.seeds.end());
        if (distinct.size() != cfg.seeds.size()) r.fail("seeds", "seeds must be distinct");
    }
    loop.seed = cfg.seeds.front();

    set_if(r, "sampler.alpha", loop.update.alpha, &Reader::real);
    set_if(r, "sampler.beta", loop.update.beta, &Reader::real);
    if (!(loop.update.alpha >= 0.0 && loop.update.alpha <= 1.0)) r.fail("sampler.alpha", "alpha must lie in [0, 1]");
    if (!(loop.update.beta >= 0.0 && loop.update.beta <= 700.0)) r.fail("sampler.beta", "beta must lie in [0, 700]");

    set_size(r, "loop.total_iterations", loop.total_iterations);
    set_size(r, "loop.iterations_per_epoch", loop.iterations_per_epoch);
    set_size(r, "loop.warmup_iterations", loop.warmup_iterations);
    positive(r, "loop.total_iterations", loop.total_iterations);
    positive(r, "loop.iterations_per_epoch", loop.iterations_per_epoch);
    if (loop.warmup_iterations > loop.total_iterations) {
        r.fail("loop.warmup_iterations", "exceeds loop.total_iterations");
    }

    set_size(r, "probe.per_bucket", loop.probes.per_bucket);
    positive(r, "probe.per_bucket", loop.probes.per_bucket);
    if (r.has("probe.mode")) {
        const auto m = r.text("probe.mode");
        if (m == "hard") loop.probes.mode = ProbeMode::hard;
        else if (m == "soft") loop.probes.mode = ProbeMode::soft;
        else r.fail("probe.mode", "expected hard or soft, got '" + m + "'");
    }
    set_if(r, "probe.initial_difficulty", loop.probes.initial_difficulty, &Reader::real);
    if (!(loop.probes.initial_difficulty >= 0.0 && loop.probes.initial_difficulty <= 1.0)) {
        r.fail("probe.initial_difficulty", "must lie in [0, 1]");
    }

    if (r.has("train.architecture")) {
        const auto a = r.text("train.architecture");
        if (a == "mlp") loop.architecture = ArchitectureKind::mlp;
        else if (a == "softmax") loop.architecture = ArchitectureKind::softmax;
        else r.fail("train.architecture", "expected mlp or softmax, got '" + a + "'");
    }
    set_size(r, "train.hidden", loop.hidden_units);
    if (loop.architecture == ArchitectureKind::mlp) positive(r, "train.hidden", loop.hidden_units);
    set_if(r, "train.lr", loop.train.base_lr, &Reader::real);
    set_if(r, "train.lr_gamma", loop.train.lr_gamma, &Reader::real);
    set_if(r, "train.lr_power", loop.train.lr_power, &Reader::real);
    set_if(r, "train.weight_decay", loop.train.weight_decay, &Reader::real);
    set_size(r, "train.batch_size", loop.train.batch_size);
    set_size(r, "train.real_per_batch", loop.train.real_per_batch);
    set_size(r, "train.synth_per_batch", loop.train.synth_per_batch);
    if (!(loop.train.base_lr > 0.0)) r.fail("train.lr", "must be positive");
    if (loop.train.lr_gamma < 0.0) r.fail("train.lr_gamma", "must be non-negative");
    if (loop.train.lr_power < 0.0) r.fail("train.lr_power", "must be non-negative");
    if (loop.train.weight_decay < 0.0) r.fail("train.weight_decay", "must be non-negative");
    positive(r, "train.batch_size", loop.train.batch_size);

    set_size(r, "eval.validation_size", loop.validation_size);
    set_size(r, "eval.test_size", loop.test_size);
    set_size(r, "pool.size", loop.pool_size);
    positive(r, "eval.validation_size", loop.validation_size);
    positive(r, "eval.test_size", loop.test_size);
    if (loop.mode == Mode::fixed_pool) positive(r, "pool.size", loop.pool_size);

    if (generator == "gaussian") {
        GaussianTaskSpec g;
        set_size(r, "gaussian.classes", g.classes);
        set_size(r, "gaussian.sectors", g.sectors);
        set_if(r, "gaussian.radius", g.radius, &Reader::real);
        if (r.has("gaussian.sector_noise")) g.sector_noise = r.reals("gaussian.sector_noise");
        if (r.has("gaussian.geometry_seed")) g.geometry_seed = r.unsigned_integer("gaussian.geometry_seed");
        if (g.classes < 2) r.fail("gaussian.classes", "needs at least 2 classes");
        positive(r, "gaussian.sectors", g.sectors);
        if (!(g.radius > 0.0)) r.fail("gaussian.radius", "must be positive");
        if (g.sector_noise.size() != g.sectors) {
            r.fail("gaussian.sector_noise", "has " + std::to_string(g.sector_noise.size()) + " entries, expected " +
                                                std::to_string(g.sectors) + " (one per sector)");
        }
        for (double s : g.sector_noise) {
            if (s < 0.0) r.fail("gaussian.sector_noise", "noise scales must be >= 0");
        }
        loop.generator = std::move(g);
    } else {
        MnistTaskSpec m;
        if (r.has("mnist.data_dir")) m.data_dir = r.text("mnist.data_dir");
        if (apply_env) {
            if (const char* env = std::getenv(kDataDirEnv); env != nullptr && *env != '\0') m.data_dir = env;
        }
        if (m.data_dir.empty()) throw ConfigError("mnist.data_dir", 0, std::string("missing (set it or ") + kDataDirEnv + ")");
        set_if(r, "mnist.rotation", m.ranges.rotation_deg, &Reader::real);
        set_if(r, "mnist.scale_lo", m.ranges.scale_lo, &Reader::real);
        set_if(r, "mnist.scale_hi", m.ranges.scale_hi, &Reader::real);
        set_if(r, "mnist.shift", m.ranges.shift_px, &Reader::real);
        set_if(r, "mnist.shear", m.ranges.shear, &Reader::real);
        set_size(r, "mnist.train_limit", m.train_limit);
        set_size(r, "mnist.test_limit", m.test_limit);
        try {
            m.ranges.validate();
        } catch (const ContractError& e) {
            throw ConfigError("mnist", 0, e.what());
        }
        if (loop.train.real_per_batch + loop.train.synth_per_batch != loop.train.batch_size) {
            r.fail("train.batch_size", "must equal train.real_per_batch + train.synth_per_batch");
        }
        loop.generator = std::move(m);
    }

    if (r.has("output.timing")) loop.record_wall_time = r.boolean("output.timing");
    cfg.output_dir = r.has("output.dir") ? std::filesystem::path(r.text("output.dir"))
                                         : std::filesystem::path("runs") / cfg.experiment;
    if (cfg.output_dir.empty()) r.fail("output.dir", "must not be empty");

    try {
        loop.validate();
    } catch (const ContractError& e) {
        throw ConfigError("", 0, e.what());
    }

    cfg.descriptor = to_descriptor(partition_for(loop.generator));
    if (r.has("space.descriptor") && r.text("space.descriptor") != cfg.descriptor) {
        r.fail("space.descriptor", "does not match the generator's partition '" + cfg.descriptor + "'");
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, bool apply_env) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", 0, "cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str(), apply_env);
    } catch (const ConfigError& e) {
        throw ConfigError(e.key(), e.line(), e.detail(), path.string());
    }
}

std::string serialize_config(const RunConfig& c) {
    const LoopConfig& l = c.loop;
    std::ostringstream out;
    auto put = [&out](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    auto num = [](double v) { return format_double(v); };
    auto count = [](std::uint64_t v) { return std::to_string(v); };

    const bool gaussian = std::holds_alternative<GaussianTaskSpec>(l.generator);
    put("experiment", quote(c.experiment));
    put("generator", gaussian ? "gaussian" : "mnist");
    put("mode", std::string(to_string(l.mode)));
    std::string seeds;
    for (std::size_t i = 0; i < c.seeds.size(); ++i) seeds += (i ? ", " : "") + count(c.seeds[i]);
    put("seeds", seeds);
    put("space.descriptor", quote(c.descriptor));
    out << '\n';
    put("sampler.alpha", num(l.update.alpha));
    put("sampler.beta", num(l.update.beta));
    put("loop.total_iterations", count(l.total_iterations));
    put("loop.iterations_per_epoch", count(l.iterations_per_epoch));
    put("loop.warmup_iterations", count(l.warmup_iterations));
    put("probe.per_bucket", count(l.probes.per_bucket));
    put("probe.mode", l.probes.mode == ProbeMode::hard ? "hard" : "soft");
    put("probe.initial_difficulty", num(l.probes.initial_difficulty));
    put("train.architecture", l.architecture == ArchitectureKind::mlp ? "mlp" : "softmax");
    put("train.hidden", count(l.hidden_units));
    put("train.lr", num(l.train.base_lr));
    put("train.lr_gamma", num(l.train.lr_gamma));
    put("train.lr_power", num(l.train.lr_power));
    put("train.weight_decay", num(l.train.weight_decay));
    put("train.batch_size", count(l.train.batch_size));
    put("train.real_per_batch", count(l.train.real_per_batch));
    put("train.synth_per_batch", count(l.train.synth_per_batch));
    put("eval.validation_size", count(l.validation_size));
    put("eval.test_size", count(l.test_size));
    put("pool.size", count(l.pool_size));
    out << '\n';
    if (gaussian) {
        const auto& g = std::get<GaussianTaskSpec>(l.generator);
        put("gaussian.classes", count(g.classes));
        put("gaussian.sectors", count(g.sectors));
        put("gaussian.radius", num(g.radius));
        std::string noise;
        for (std::size_t i = 0; i < g.sector_noise.size(); ++i) noise += (i ? ", " : "") + num(g.sector_noise[i]);
        put("gaussian.sector_noise", noise);
        put("gaussian.geometry_seed", count(g.geometry_seed));
    } else {
        const auto& m = std::get<MnistTaskSpec>(l.generator);
        put("mnist.data_dir", quote(m.data_dir.string()));
        put("mnist.rotation", num(m.ranges.rotation_deg));
        put("mnist.scale_lo", num(m.ranges.scale_lo));
        put("mnist.scale_hi", num(m.ranges.scale_hi));
        put("mnist.shift", num(m.ranges.shift_px));
        put("mnist.shear", num(m.ranges.shear));
        put("mnist.train_limit", count(m.train_limit));
        put("mnist.test_limit", count(m.test_limit));
    }
    out << '\n';
    put("output.dir", quote(c.output_dir.string()));
    put("output.timing", l.record_wall_time ? "true" : "false");
    return out.str();
}

}  // namespace sampleahead::cli
