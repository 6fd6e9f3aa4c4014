#include "sampleahead/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "sampleahead/errors.hpp"
#include "sampleahead/fixed_pool.hpp"
#include "sampleahead/mnist_task.hpp"

namespace sampleahead {

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::adaptive: return "adaptive";
        case Mode::uniform_baseline: return "uniform-baseline";
        case Mode::frozen_distribution: return "frozen-distribution";
        case Mode::fixed_pool: return "fixed-pool";
    }
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
    for (Mode m : {Mode::adaptive, Mode::uniform_baseline, Mode::frozen_distribution, Mode::fixed_pool}) {
        if (to_string(m) == text) return m;
    }
    return std::nullopt;
}

void LoopConfig::validate() const {
    if (total_iterations == 0) throw ContractError("total_iterations must be positive");
    if (iterations_per_epoch == 0) throw ContractError("iterations_per_epoch must be positive");
    if (warmup_iterations > total_iterations) throw ContractError("warmup_iterations exceeds total_iterations");
    update.validate();
    if (probes.per_bucket == 0) throw ContractError("probes per bucket must be positive");
    if (!(probes.initial_difficulty >= 0.0 && probes.initial_difficulty <= 1.0)) {
        throw ContractError("initial difficulty must lie in [0, 1]");
    }
    if (const auto* g = std::get_if<GaussianTaskSpec>(&generator)) {
        g->validate();
        if (train.batch_size == 0) throw ContractError("batch size must be positive");
        TrainConfig t = train;
        t.real_per_batch = 0;
        t.synth_per_batch = t.batch_size;
        t.validate();
    } else {
        std::get<MnistTaskSpec>(generator).ranges.validate();
        train.validate();
    }
    if (architecture == ArchitectureKind::mlp && hidden_units == 0) throw ContractError("mlp needs hidden units");
    if (mode == Mode::fixed_pool && pool_size == 0) throw ContractError("fixed-pool mode needs a positive pool size");
    if (validation_size == 0 || test_size == 0) throw ContractError("evaluation sets must be non-empty");
}

BucketPartition partition_for(const GeneratorSpec& spec) {
    if (const auto* g = std::get_if<GaussianTaskSpec>(&spec)) return gaussian_partition(*g);
    return mnist_partition();
}

std::size_t LoopConfig::epoch_count() const noexcept {
    return (total_iterations + iterations_per_epoch - 1) / iterations_per_epoch;
}

namespace {

Dataset draw_from_prior(const Generator& generator, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const auto dist = SamplingDistribution::from_prior(make_prior(volume_prior(generator.partition())));
    Dataset out;
    out.reserve(n);
    for (const auto& s : sample_params(dist, generator.partition(), n, rng)) {
        out.push_back(generator.generate(s.point, rng));
    }
    return out;
}

Dataset pool_to_dataset(const ImagePool& pool) {
    Dataset out;
    out.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool.label(i) >= kMnistClasses) {
            throw DataError("image " + std::to_string(i) + " has label " + std::to_string(pool.label(i)) +
                            ", expected a digit");
        }
        out.push_back(image_datum(pool.image(i), pool.label(i)));
    }
    return out;
}

}  // namespace

Task make_task(const LoopConfig& config) {
    Task task;
    if (const auto* g = std::get_if<GaussianTaskSpec>(&config.generator)) {
        task.generator = std::make_unique<GaussianGenerator>(*g);
    } else {
        const auto& spec = std::get<MnistTaskSpec>(config.generator);
        if (spec.data_dir.empty() || !std::filesystem::is_directory(spec.data_dir)) {
            throw DataError("MNIST data directory '" + spec.data_dir.string() + "' does not exist");
        }
        const auto files = MnistFiles::in(spec.data_dir);
        auto train = std::make_shared<const ImagePool>(
            load_idx(files.train_images, files.train_labels).prefix(spec.train_limit));
        for (std::size_t c = 0; c < kMnistClasses; ++c) {
            if (train->of_class(c).empty()) throw DataError("class " + std::to_string(c) + " absent from training images");
        }
        task.real_train = pool_to_dataset(*train);
        if (std::filesystem::exists(files.test_images) && std::filesystem::exists(files.test_labels)) {
            task.test = pool_to_dataset(load_idx(files.test_images, files.test_labels).prefix(spec.test_limit));
        }
        task.generator = std::make_unique<MnistGenerator>(std::move(train), spec.ranges);
    }
    task.validation = draw_from_prior(*task.generator, config.validation_size,
                                      derive_seed(config.seed, Stream::validation));
    if (task.test.empty()) {
        task.test = draw_from_prior(*task.generator, config.test_size, derive_seed(config.seed, Stream::test));
    }
    return task;
}

RunReport run(const LoopConfig& config, const LogSink& log) {
    config.validate();
    const Task task = make_task(config);
    return run(config, task, log);
}

RunReport run(const LoopConfig& config, const Task& task, const LogSink& log) {
    config.validate();
    using Clock = std::chrono::steady_clock;
    const Generator& generator = *task.generator;
    const BucketPartition& partition = generator.partition();
    const std::size_t bucket_count = partition.bucket_count();

    const Architecture arch =
        config.architecture == ArchitectureKind::mlp
            ? Architecture{Mlp{generator.feature_dim(), config.hidden_units, generator.class_count()}}
            : Architecture{SoftmaxRegression{generator.feature_dim(), generator.class_count()}};

    RunReport report(Classifier::initialize(arch, derive_seed(config.seed, Stream::init)));
    Classifier& clf = report.classifier;
    report.prior = volume_prior(partition);
    report.partition_descriptor = to_descriptor(partition);
    const Prior prior = make_prior(report.prior);

    Rng sampler_rng(derive_seed(config.seed, Stream::sampler));
    Rng generator_rng(derive_seed(config.seed, Stream::generator));
    Rng probe_point_rng(derive_seed(config.seed, Stream::probe));
    Rng probe_data_rng(splitmix64(derive_seed(config.seed, Stream::probe)));
    Rng real_rng(derive_seed(config.seed, Stream::real_data));

    const ProbeSet probes = build_probe_set(generator, config.probes.per_bucket, probe_point_rng, probe_data_rng);

    std::optional<FixedPool> pool;
    if (config.mode == Mode::fixed_pool) {
        Rng pool_rng(derive_seed(config.seed, Stream::pool));
        pool = fixed_pool_snapshot(generator, config.pool_size, pool_rng);
    }

    const bool mix_real = !task.real_train.empty();
    const std::size_t synth_per_batch = mix_real ? config.train.synth_per_batch : config.train.batch_size;
    const std::size_t real_per_batch = mix_real ? config.train.real_per_batch : 0;
    std::vector<std::size_t> real_order(task.real_train.size());
    std::size_t real_cursor = real_order.size();

    UpdateParams params = config.update;
    if (config.mode == Mode::uniform_baseline) params.alpha = 1.0;

    DifficultyField field = DifficultyField::constant(bucket_count, config.probes.initial_difficulty);
    std::vector<Datum> batch;
    batch.reserve(config.train.batch_size);
    std::size_t iteration = 0;

    for (std::size_t t = 0; t < config.epoch_count(); ++t) {
        const auto started = Clock::now();
        EpochRecord record;
        record.epoch = t;

        SamplingDistribution dist = SamplingDistribution::from_prior(prior);
        if (t > 0 && iteration >= config.warmup_iterations) {
            const ProbeResult result = probe_difficulties(probes, clf, config.probes.mode, t - 1);
            field = bucket_difficulties(result, probes, field);
            record.difficulty = field.values;
            record.probe_error = mean_difficulty(result);
            if (config.mode != Mode::frozen_distribution) dist = update_distribution(prior, field, params, t);
        }
        record.distribution.assign(dist.probs().begin(), dist.probs().end());

        const std::size_t epoch_end = std::min(config.total_iterations, iteration + config.iterations_per_epoch);
        double loss_sum = 0.0;
        std::size_t steps = 0;
        try {
            for (; iteration < epoch_end; ++iteration) {
                batch.clear();
                for (std::size_t i = 0; i < real_per_batch; ++i) {
                    if (real_cursor == real_order.size()) {
                        for (std::size_t j = 0; j < real_order.size(); ++j) real_order[j] = j;
                        for (std::size_t j = real_order.size(); j > 1; --j) {
                            std::swap(real_order[j - 1], real_order[real_rng.index(j)]);
                        }
                        real_cursor = 0;
                    }
                    batch.push_back(task.real_train[real_order[real_cursor++]]);
                }
                for (std::size_t i = 0; i < synth_per_batch; ++i) {
                    BucketId k = sample_bucket(dist, sampler_rng);
                    if (pool) {
                        auto drawn = pool->draw(k, sampler_rng);
                        if (!drawn) {
                            const BucketId alt = pool->nearest_populated(k);
                            if (log && report.pool_fallbacks == 0) {
                                log("fixed pool has no member in bucket " + std::to_string(k) +
                                    "; falling back to bucket " + std::to_string(alt));
                            }
                            ++report.pool_fallbacks;
                            drawn = pool->draw(alt, sampler_rng);
                        }
                        batch.push_back(drawn->get());
                    } else {
                        const ParamPoint point = uniform_in_bucket(partition, k, sampler_rng);
                        batch.push_back(generator.generate(point, generator_rng));
                    }
                }
                loss_sum += train_step(clf, batch, config.train, iteration);
                ++steps;
            }
        } catch (const DivergenceError& e) {
            report.diverged_at = e.iteration();
            report.iterations = e.iteration();
            report.test_error = std::nan("");
            if (log) log(std::string("run diverged: ") + e.what());
            return report;
        }

        record.mean_loss = steps == 0 ? 0.0 : loss_sum / static_cast<double>(steps);
        record.validation_error = evaluate(clf, task.validation, bucket_count).error;
        if (config.record_wall_time) {
            record.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
        }
        report.epochs.push_back(std::move(record));
    }
    if (log && report.pool_fallbacks > 0) {
        log("fixed pool fell back to a neighbouring bucket " + std::to_string(report.pool_fallbacks) + " times");
    }

    report.iterations = iteration;
    const Evaluation test = evaluate(clf, task.test, bucket_count);
    report.test_error = test.error;
    report.test_bucket_error = test.bucket_error;
    return report;
}

ComparisonReport compare(const std::vector<LoopConfig>& configs, const std::vector<std::uint64_t>& seeds,
                         std::size_t jobs, const LogSink& log) {
    if (configs.size() < 2) throw ContractError("compare needs at least two configs");
    if (seeds.empty()) throw ContractError("compare needs at least one seed");

    ComparisonReport out;
    out.seeds = seeds;
    out.errors.assign(configs.size(), std::vector<std::optional<double>>(seeds.size()));
    out.failures.assign(configs.size(), std::vector<std::string>(seeds.size()));

    const std::size_t cells = configs.size() * seeds.size();
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) {
            const std::size_t i = cell / seeds.size();
            const std::size_t j = cell % seeds.size();
            LoopConfig cfg = configs[i];
            cfg.seed = seeds[j];
            try {
                const RunReport r = run(cfg);
                if (r.diverged_at) {
                    out.failures[i][j] = "diverged at iteration " + std::to_string(*r.diverged_at);
                } else {
                    out.errors[i][j] = r.test_error;
                }
            } catch (const std::exception& e) {
                out.failures[i][j] = e.what();
            }
            if (log) {
                const std::lock_guard lock(log_mutex);
                log("config " + std::to_string(i) + " seed " + std::to_string(seeds[j]) + ": " +
                    (out.errors[i][j] ? format_double(*out.errors[i][j]) : "failed (" + out.failures[i][j] + ")"));
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(jobs, 1, cells);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::vector<double> ok;
        for (const auto& e : out.errors[i]) {
            if (e) ok.push_back(*e);
        }
        double mean = std::nan("");
        double sd = std::nan("");
        if (!ok.empty()) {
            mean = 0.0;
            for (double v : ok) mean += v;
            mean /= static_cast<double>(ok.size());
        }
        if (ok.size() >= 2) {
            double ss = 0.0;
            for (double v : ok) ss += (v - mean) * (v - mean);
            sd = std::sqrt(ss / static_cast<double>(ok.size() - 1));
        }
        out.means.push_back(mean);
        out.stddevs.push_back(sd);
    }

    for (std::size_t a = 0; a < configs.size(); ++a) {
        for (std::size_t b = a + 1; b < configs.size(); ++b) {
            ComparisonPair pair{a, b, std::nan(""), std::nullopt, false, {}};
            const bool complete = std::all_of(out.errors[a].begin(), out.errors[a].end(),
                                              [](const auto& e) { return e.has_value(); }) &&
                                  std::all_of(out.errors[b].begin(), out.errors[b].end(),
                                              [](const auto& e) { return e.has_value(); });
            if (!complete) {
                pair.skipped_reason = "a run failed for at least one seed";
            } else {
                std::vector<double> xs, ys;
                for (std::size_t j = 0; j < seeds.size(); ++j) {
                    xs.push_back(*out.errors[a][j]);
                    ys.push_back(*out.errors[b][j]);
                }
                double diff = 0.0;
                for (std::size_t j = 0; j < xs.size(); ++j) diff += xs[j] - ys[j];
                pair.mean_difference = diff / static_cast<double>(xs.size());
                if (xs.size() >= 2) {
                    try {
                        pair.test = paired_t_test(xs, ys);
                    } catch (const DegenerateError&) {
                        pair.zero_variance = true;
                    }
                } else {
                    pair.skipped_reason = "t-test needs at least two seeds";
                }
            }
            out.pairs.push_back(std::move(pair));
        }
    }
    return out;
}

}  // namespace sampleahead
