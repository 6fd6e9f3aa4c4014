#include "sampleahead/learner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "sampleahead/errors.hpp"
#include "sampleahead/rng.hpp"

namespace sampleahead {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void softmax_inplace(std::span<double> z) {
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

// out[i] = b[i] + sum_j W[i, j] * x[j]
void affine(std::span<const double> w, std::span<const double> b, std::span<const double> x, std::span<double> out) {
    const std::size_t n_in = x.size();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double* row = w.data() + i * n_in;
        double acc = b[i];
        for (std::size_t j = 0; j < n_in; ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
}

}  // namespace

std::size_t parameter_count(const Architecture& arch) noexcept {
    return std::visit(overloaded{
                          [](const SoftmaxRegression& a) { return a.classes * a.inputs + a.classes; },
                          [](const Mlp& a) {
                              return a.hidden * a.inputs + a.hidden + a.classes * a.hidden + a.classes;
                          },
                      },
                      arch);
}

double TrainConfig::learning_rate(std::size_t iteration) const noexcept {
    return base_lr * std::pow(1.0 + lr_gamma * static_cast<double>(iteration), -lr_power);
}

void TrainConfig::validate() const {
    if (!(base_lr >= 0.0) || !std::isfinite(base_lr)) throw ContractError("base learning rate must be >= 0");
    if (!(lr_gamma >= 0.0) || !(lr_power >= 0.0)) throw ContractError("inv-policy gamma and power must be >= 0");
    if (!(weight_decay >= 0.0)) throw ContractError("weight decay must be >= 0");
    if (batch_size == 0) throw ContractError("batch size must be positive");
    if (real_per_batch + synth_per_batch != batch_size) {
        throw ContractError("real_per_batch + synth_per_batch must equal batch_size");
    }
}

Classifier::Classifier(Architecture arch, std::vector<double> theta) : arch_(arch), theta_(std::move(theta)) {
    if (theta_.size() != parameter_count(arch_)) {
        throw ContractError("parameter vector has " + std::to_string(theta_.size()) + " entries, architecture needs " +
                            std::to_string(parameter_count(arch_)));
    }
    const bool ok = std::visit(overloaded{
                                   [](const SoftmaxRegression& a) { return a.inputs > 0 && a.classes >= 2; },
                                   [](const Mlp& a) { return a.inputs > 0 && a.hidden > 0 && a.classes >= 2; },
                               },
                               arch_);
    if (!ok) throw ContractError("architecture dimensions must be positive with at least 2 classes");
}

Classifier Classifier::initialize(const Architecture& arch, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> theta(parameter_count(arch), 0.0);
    auto xavier = [&](std::size_t offset, std::size_t fan_out, std::size_t fan_in) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (std::size_t i = 0; i < fan_out * fan_in; ++i) theta[offset + i] = rng.uniform(-limit, limit);
    };
    std::visit(overloaded{
                   [&](const SoftmaxRegression& a) { xavier(0, a.classes, a.inputs); },
                   [&](const Mlp& a) {
                       xavier(0, a.hidden, a.inputs);
                       xavier(a.hidden * a.inputs + a.hidden, a.classes, a.hidden);
                   },
               },
               arch);
    return Classifier(arch, std::move(theta));
}

std::size_t Classifier::input_dim() const noexcept {
    return std::visit([](const auto& a) { return a.inputs; }, arch_);
}

std::size_t Classifier::class_count() const noexcept {
    return std::visit([](const auto& a) { return a.classes; }, arch_);
}

std::vector<double> Classifier::forward(std::span<const double> x) const {
    if (x.size() != input_dim()) {
        throw ContractError("feature length " + std::to_string(x.size()) + " != classifier input " +
                            std::to_string(input_dim()));
    }
    std::vector<double> out(class_count());
    const std::span<const double> th = theta_;
    std::visit(overloaded{
                   [&](const SoftmaxRegression& a) {
                       affine(th.subspan(0, a.classes * a.inputs), th.subspan(a.classes * a.inputs, a.classes), x,
                              out);
                   },
                   [&](const Mlp& a) {
                       std::vector<double> h(a.hidden);
                       std::size_t o = 0;
                       const auto w1 = th.subspan(o, a.hidden * a.inputs);
                       o += a.hidden * a.inputs;
                       const auto b1 = th.subspan(o, a.hidden);
                       o += a.hidden;
                       const auto w2 = th.subspan(o, a.classes * a.hidden);
                       o += a.classes * a.hidden;
                       const auto b2 = th.subspan(o, a.classes);
                       affine(w1, b1, x, h);
                       for (double& v : h) v = std::tanh(v);
                       affine(w2, b2, h, out);
                   },
               },
               arch_);
    softmax_inplace(out);
    return out;
}

std::size_t Classifier::predict(std::span<const double> features) const {
    const auto p = forward(features);
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

LossGradient loss_and_gradient(const Classifier& clf, std::span<const Datum> batch, double weight_decay) {
    if (batch.empty()) throw ContractError("empty batch");
    const auto th = clf.parameters();
    LossGradient result;
    result.gradient.assign(th.size(), 0.0);
    auto& g = result.gradient;
    const double scale = 1.0 / static_cast<double>(batch.size());
    const std::size_t n_classes = clf.class_count();
    double ce = 0.0;

    std::visit(overloaded{
                   [&](const SoftmaxRegression& a) {
                       std::vector<double> p(a.classes);
                       const std::size_t b_off = a.classes * a.inputs;
                       for (const Datum& d : batch) {
                           if (d.features.size() != a.inputs) throw ContractError("feature length mismatch in batch");
                           if (d.label >= n_classes) throw ContractError("label out of range in batch");
                           affine(th.subspan(0, b_off), th.subspan(b_off, a.classes), d.features, p);
                           softmax_inplace(p);
                           ce -= std::log(std::max(p[d.label], 1e-300));
                           p[d.label] -= 1.0;
                           for (std::size_t i = 0; i < a.classes; ++i) {
                               const double delta = p[i] * scale;
                               double* row = g.data() + i * a.inputs;
                               for (std::size_t j = 0; j < a.inputs; ++j) row[j] += delta * d.features[j];
                               g[b_off + i] += delta;
                           }
                       }
                   },
                   [&](const Mlp& a) {
                       const std::size_t w1 = 0;
                       const std::size_t b1 = w1 + a.hidden * a.inputs;
                       const std::size_t w2 = b1 + a.hidden;
                       const std::size_t b2 = w2 + a.classes * a.hidden;
                       std::vector<double> h(a.hidden), p(a.classes), dh(a.hidden);
                       for (const Datum& d : batch) {
                           if (d.features.size() != a.inputs) throw ContractError("feature length mismatch in batch");
                           if (d.label >= n_classes) throw ContractError("label out of range in batch");
                           affine(th.subspan(w1, a.hidden * a.inputs), th.subspan(b1, a.hidden), d.features, h);
                           for (double& v : h) v = std::tanh(v);
                           affine(th.subspan(w2, a.classes * a.hidden), th.subspan(b2, a.classes), h, p);
                           softmax_inplace(p);
                           ce -= std::log(std::max(p[d.label], 1e-300));
                           p[d.label] -= 1.0;
                           std::fill(dh.begin(), dh.end(), 0.0);
                           for (std::size_t i = 0; i < a.classes; ++i) {
                               const double delta = p[i] * scale;
                               const double* w_row = th.data() + w2 + i * a.hidden;
                               double* g_row = g.data() + w2 + i * a.hidden;
                               for (std::size_t j = 0; j < a.hidden; ++j) {
                                   g_row[j] += delta * h[j];
                                   dh[j] += delta * w_row[j];
                               }
                               g[b2 + i] += delta;
                           }
                           for (std::size_t j = 0; j < a.hidden; ++j) {
                               const double dz = dh[j] * (1.0 - h[j] * h[j]);
                               double* g_row = g.data() + w1 + j * a.inputs;
                               for (std::size_t k = 0; k < a.inputs; ++k) g_row[k] += dz * d.features[k];
                               g[b1 + j] += dz;
                           }
                       }
                   },
               },
               clf.architecture());

    double sq = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
        sq += th[i] * th[i];
        g[i] += weight_decay * th[i];
    }
    result.loss = ce * scale + 0.5 * weight_decay * sq;
    return result;
}

double train_step(Classifier& clf, std::span<const Datum> batch, const TrainConfig& config, std::size_t iteration) {
    const auto lg = loss_and_gradient(clf, batch, config.weight_decay);
    if (!std::isfinite(lg.loss)) throw DivergenceError(iteration);
    const double lr = config.learning_rate(iteration);
    if (lr != 0.0) {
        auto th = clf.parameters();
        for (std::size_t i = 0; i < th.size(); ++i) th[i] -= lr * lg.gradient[i];
    }
    return lg.loss;
}

Evaluation evaluate(const Classifier& clf, std::span<const Datum> data, std::size_t bucket_count) {
    if (data.empty()) throw ContractError("cannot evaluate on an empty dataset");
    Evaluation ev;
    std::vector<std::size_t> wrong(bucket_count, 0);
    ev.bucket_count.assign(bucket_count, 0);
    std::size_t total_wrong = 0;
    for (const Datum& d : data) {
        const bool miss = clf.predict(d.features) != d.label;
        total_wrong += miss ? 1 : 0;
        if (d.provenance && d.provenance->bucket < bucket_count) {
            ++ev.bucket_count[d.provenance->bucket];
            wrong[d.provenance->bucket] += miss ? 1 : 0;
        }
    }
    ev.error = static_cast<double>(total_wrong) / static_cast<double>(data.size());
    ev.bucket_error.resize(bucket_count);
    for (std::size_t k = 0; k < bucket_count; ++k) {
        ev.bucket_error[k] = ev.bucket_count[k] == 0
                                 ? std::nan("")
                                 : static_cast<double>(wrong[k]) / static_cast<double>(ev.bucket_count[k]);
    }
    return ev;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

std::uint64_t get_u(std::istream& in, int bytes) {
    unsigned char b[8] = {};
    if (!in.read(reinterpret_cast<char*>(b), bytes)) throw IoError("truncated checkpoint");
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Classifier& clf, std::uint64_t iteration) {
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    put_u32(out, kCheckpointVersion);
    std::visit(overloaded{
                   [&](const SoftmaxRegression& a) {
                       put_u32(out, 0);
                       put_u64(out, a.inputs);
                       put_u64(out, 0);
                       put_u64(out, a.classes);
                   },
                   [&](const Mlp& a) {
                       put_u32(out, 1);
                       put_u64(out, a.inputs);
                       put_u64(out, a.hidden);
                       put_u64(out, a.classes);
                   },
               },
               clf.architecture());
    put_u64(out, iteration);
    const auto th = clf.parameters();
    put_u64(out, th.size());
    for (double v : th) put_u64(out, std::bit_cast<std::uint64_t>(v));
    if (!out) throw IoError("failed writing checkpoint");
}

Checkpoint load_checkpoint(std::istream& in) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
        throw IoError("not a classifier checkpoint (bad magic)");
    }
    const auto version = static_cast<std::uint32_t>(get_u(in, 4));
    if (version != kCheckpointVersion) throw IoError("unsupported checkpoint version " + std::to_string(version));
    const auto kind = static_cast<std::uint32_t>(get_u(in, 4));
    const std::size_t inputs = get_u(in, 8);
    const std::size_t hidden = get_u(in, 8);
    const std::size_t classes = get_u(in, 8);
    Architecture arch;
    if (kind == 0) {
        arch = SoftmaxRegression{inputs, classes};
    } else if (kind == 1) {
        arch = Mlp{inputs, hidden, classes};
    } else {
        throw IoError("unknown architecture tag " + std::to_string(kind));
    }
    const std::uint64_t iteration = get_u(in, 8);
    const std::size_t n = get_u(in, 8);
    if (n != parameter_count(arch)) throw IoError("checkpoint parameter count does not match its architecture");
    std::vector<double> theta(n);
    for (double& v : theta) v = std::bit_cast<double>(get_u(in, 8));
    return Checkpoint{Classifier(arch, std::move(theta)), iteration};
}

}  // namespace sampleahead
