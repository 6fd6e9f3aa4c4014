#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sampleahead/errors.hpp"
#include "sampleahead/learner.hpp"
#include "sampleahead/rng.hpp"

using namespace sampleahead;

using fixture::perturbed;
using fixture::random_batch;

TEST(GradientCheck, SoftmaxRegression) {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const SoftmaxRegression arch{1 + rng.index(5), 2 + rng.index(4)};
        const auto clf = perturbed(arch, rng);
        const auto batch = random_batch(rng, 1 + rng.index(8), arch.inputs, arch.classes);
        const double wd = rng.uniform(0.0, 0.01);
        const auto analytic = loss_and_gradient(clf, batch, wd).gradient;
        const auto numeric = oracle::numeric_gradient(clf, batch, wd);
        ASSERT_LT(oracle::relative_error(analytic, numeric), 1e-4);
    }
}

TEST(GradientCheck, Mlp) {
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const Mlp arch{1 + rng.index(5), 1 + rng.index(8), 2 + rng.index(4)};
        const auto clf = perturbed(arch, rng);
        const auto batch = random_batch(rng, 1 + rng.index(8), arch.inputs, arch.classes);
        const double wd = rng.uniform(0.0, 0.01);
        const auto analytic = loss_and_gradient(clf, batch, wd).gradient;
        const auto numeric = oracle::numeric_gradient(clf, batch, wd);
        ASSERT_LT(oracle::relative_error(analytic, numeric), 1e-4);
    }
}

TEST(Classifier, LossMatchesDirectCrossEntropy) {
    // softmax regression, 2 inputs, 3 classes, written out by hand
    const std::vector<double> theta{1, 0, 0, 1, -1, -1, 0.1, 0.2, 0.3};
    const Classifier clf(SoftmaxRegression{2, 3}, theta);
    const Dataset batch{{{0.5, -0.5}, 2, std::nullopt}};
    const double z0 = 0.5 + 0.1, z1 = -0.5 + 0.2, z2 = 0.0 + 0.3;
    const double ce = -(z2 - std::log(std::exp(z0) + std::exp(z1) + std::exp(z2)));
    double sq = 0.0;
    for (double t : theta) sq += t * t;
    EXPECT_NEAR(loss_and_gradient(clf, batch, 0.01).loss, ce + 0.005 * sq, 1e-12);
}

TEST(Classifier, ForwardIsNormalizedAndStable) {
    const Classifier clf(SoftmaxRegression{1, 3}, {1000.0, -1000.0, 0.0, 0.0, 0.0, 0.0});
    const std::vector<double> x{5.0};
    const auto p = clf.forward(x);
    EXPECT_TRUE(std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]));
    EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
    EXPECT_EQ(clf.predict(x), 0u);
    EXPECT_THROW((void)clf.forward(std::vector<double>{1.0, 2.0}), ContractError);
}

TEST(Classifier, ZeroParametersGiveUniformScores) {
    const Classifier clf(Mlp{3, 4, 5}, std::vector<double>(parameter_count(Mlp{3, 4, 5}), 0.0));
    for (double p : clf.forward(std::vector<double>{1.0, -2.0, 3.0})) EXPECT_DOUBLE_EQ(p, 0.2);
}

TEST(Classifier, ForwardMatchesExtendedPrecisionSoftmax) {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const SoftmaxRegression arch{1 + rng.index(5), 2 + rng.index(5)};
        auto clf = Classifier::initialize(arch, rng.bits());
        for (auto& t : clf.parameters()) t = rng.uniform(-5.0, 5.0);
        std::vector<double> x(arch.inputs);
        for (auto& v : x) v = rng.uniform(-3.0, 3.0);
        // weights row-major (class x input), then biases
        const auto theta = clf.parameters();
        std::vector<long double> z(arch.classes);
        long double zmax = -1e300L, sum = 0.0L;
        for (std::size_t c = 0; c < arch.classes; ++c) {
            z[c] = theta[arch.classes * arch.inputs + c];
            for (std::size_t j = 0; j < arch.inputs; ++j) z[c] += static_cast<long double>(theta[c * arch.inputs + j]) * x[j];
            zmax = std::max(zmax, z[c]);
        }
        for (auto& v : z) sum += v = std::exp(v - zmax);
        const auto p = clf.forward(x);
        for (std::size_t c = 0; c < arch.classes; ++c) ASSERT_NEAR(p[c], static_cast<double>(z[c] / sum), 1e-9);
    }
}

TEST(Classifier, XavierInitWithinBoundsAndSeeded) {
    const Mlp arch{4, 6, 3};
    const auto a = Classifier::initialize(arch, 9);
    const auto b = Classifier::initialize(arch, 9);
    const auto c = Classifier::initialize(arch, 10);
    EXPECT_EQ(parameter_count(arch), 6u * 4u + 6u + 3u * 6u + 3u);
    EXPECT_TRUE(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
    EXPECT_FALSE(std::equal(a.parameters().begin(), a.parameters().end(), c.parameters().begin()));
    const double l1 = std::sqrt(6.0 / 10.0), l2 = std::sqrt(6.0 / 9.0);
    const auto t = a.parameters();
    for (std::size_t i = 0; i < 24; ++i) EXPECT_LE(std::fabs(t[i]), l1);
    for (std::size_t i = 24; i < 30; ++i) EXPECT_EQ(t[i], 0.0);
    for (std::size_t i = 30; i < 48; ++i) EXPECT_LE(std::fabs(t[i]), l2);
    for (std::size_t i = 48; i < 51; ++i) EXPECT_EQ(t[i], 0.0);
}

TEST(TrainConfig, InvSchedule) {
    TrainConfig cfg;
    cfg.base_lr = 0.01;
    cfg.lr_gamma = 1e-4;
    cfg.lr_power = 0.75;
    EXPECT_DOUBLE_EQ(cfg.learning_rate(0), 0.01);
    EXPECT_NEAR(cfg.learning_rate(10000), 0.01 * std::pow(2.0, -0.75), 1e-15);
}

TEST(TrainConfig, BatchSplitMustAddUp) {
    TrainConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.synth_per_batch = 17;
    EXPECT_THROW(cfg.validate(), ContractError);
}

TEST(TrainStep, ReducesLossOnSeparableData) {
    Rng rng(3);
    Dataset data;
    for (int i = 0; i < 64; ++i) {
        const std::size_t c = rng.index(2);
        data.push_back({{c == 0 ? rng.uniform(-2, -1) : rng.uniform(1, 2), rng.uniform(-1, 1)}, c, std::nullopt});
    }
    auto clf = Classifier::initialize(Mlp{2, 8, 2}, 4);
    TrainConfig cfg;
    cfg.base_lr = 0.2;
    const double before = train_step(clf, data, cfg, 0);
    double after = before;
    for (std::size_t t = 1; t < 200; ++t) after = train_step(clf, data, cfg, t);
    EXPECT_LT(after, 0.5 * before);
    EXPECT_EQ(evaluate(clf, data, 1).error, 0.0);
}

TEST(TrainStep, ZeroLearningRateLeavesParametersAlone) {
    Rng rng(5);
    auto clf = fixture::perturbed(Mlp{3, 4, 2}, rng);
    const std::vector<double> before(clf.parameters().begin(), clf.parameters().end());
    const auto batch = fixture::random_batch(rng, 8, 3, 2);
    TrainConfig cfg;
    cfg.base_lr = 0.0;
    const double first = train_step(clf, batch, cfg, 0);
    for (std::size_t t = 1; t < 20; ++t) EXPECT_EQ(train_step(clf, batch, cfg, t), first);
    EXPECT_TRUE(std::equal(before.begin(), before.end(), clf.parameters().begin()));
}

TEST(TrainStep, TrajectoryIsDeterministic) {
    Rng rng(6);
    const auto batch = fixture::random_batch(rng, 16, 3, 3);
    auto a = Classifier::initialize(Mlp{3, 5, 3}, 77), b = Classifier::initialize(Mlp{3, 5, 3}, 77);
    TrainConfig cfg;
    cfg.base_lr = 0.1;
    for (std::size_t t = 0; t < 50; ++t) ASSERT_EQ(train_step(a, batch, cfg, t), train_step(b, batch, cfg, t));
    EXPECT_TRUE(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
}

TEST(TrainStep, NonFiniteLossThrows) {
    Classifier clf(SoftmaxRegression{1, 2}, {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0});
    const Dataset batch{{{1.0}, 0, std::nullopt}};
    EXPECT_THROW((void)train_step(clf, batch, TrainConfig{}, 7), DivergenceError);
}

TEST(Evaluate, PerBucketErrors) {
    const Classifier clf(SoftmaxRegression{1, 2}, {0.0, 0.0, 0.0, 1.0});  // always class 1
    const Dataset data{{{0.0}, 1, Provenance{{}, 0}},
                       {{0.0}, 0, Provenance{{}, 0}},
                       {{0.0}, 0, Provenance{{}, 2}},
                       {{0.0}, 0, std::nullopt}};
    const auto e = evaluate(clf, data, 3);
    EXPECT_DOUBLE_EQ(e.error, 0.75);
    EXPECT_DOUBLE_EQ(e.bucket_error[0], 0.5);
    EXPECT_TRUE(std::isnan(e.bucket_error[1]));
    EXPECT_DOUBLE_EQ(e.bucket_error[2], 1.0);
    EXPECT_EQ(e.bucket_count[0], 2u);
}

TEST(Evaluate, BucketErrorsAggregateToOverall) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto clf = fixture::perturbed(SoftmaxRegression{2, 3}, rng);
        auto data = fixture::random_batch(rng, 1 + rng.index(200), 2, 3);
        for (auto& d : data) d.provenance = Provenance{{}, rng.index(6)};
        const auto e = evaluate(clf, data, 6);
        double wrong = 0.0;
        for (std::size_t k = 0; k < 6; ++k)
            if (e.bucket_count[k] > 0) wrong += std::round(e.bucket_error[k] * static_cast<double>(e.bucket_count[k]));
        ASSERT_EQ(wrong / static_cast<double>(data.size()), e.error);
    }
    EXPECT_THROW((void)evaluate(Classifier::initialize(SoftmaxRegression{2, 3}, 1), Dataset{}, 1), ContractError);
}

TEST(Checkpoint, RoundTripsBitExactly) {
    for (const Architecture arch : {Architecture{SoftmaxRegression{3, 4}}, Architecture{Mlp{5, 7, 3}}}) {
        const auto clf = Classifier::initialize(arch, 11);
        std::stringstream buf;
        save_checkpoint(buf, clf, 1234);
        const auto blob = buf.str();
        EXPECT_EQ(blob.substr(0, 8), std::string(kCheckpointMagic, 8));
        const auto ck = load_checkpoint(buf);
        EXPECT_EQ(ck.iteration, 1234u);
        EXPECT_EQ(ck.classifier.architecture(), arch);
        EXPECT_TRUE(std::equal(clf.parameters().begin(), clf.parameters().end(), ck.classifier.parameters().begin()));
    }
}

TEST(Checkpoint, RejectsCorruptBlobs) {
    const auto clf = Classifier::initialize(Mlp{2, 3, 2}, 1);
    std::stringstream buf;
    save_checkpoint(buf, clf, 1);
    auto blob = buf.str();

    auto bad_magic = blob;
    bad_magic[0] = 'X';
    std::stringstream a(bad_magic);
    EXPECT_THROW((void)load_checkpoint(a), IoError);

    std::stringstream b(blob.substr(0, blob.size() - 3));
    EXPECT_THROW((void)load_checkpoint(b), IoError);

    auto bad_version = blob;
    bad_version[8] = 9;
    std::stringstream c(bad_version);
    EXPECT_THROW((void)load_checkpoint(c), IoError);
}
