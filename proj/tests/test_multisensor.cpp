#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ajscc/errors.hpp"
#include "ajscc/multisensor.hpp"

using namespace ajscc;

namespace {

SensorNode sensor(int id, double x1n, double x2n, int levels = 20) {
    SensorNode s;
    s.id = id;
    s.mapping = make_config(5.0, levels, 1.0);
    s.truth = {x1n * s.mapping.v1, x2n * s.mapping.v2};
    return s;
}

std::vector<ChannelSpec> channels(std::size_t n, double snr_db) {
    std::vector<ChannelSpec> out(n);
    for (auto& c : out) c.snr_db = snr_db;
    return out;
}

}  // namespace

TEST_CASE("assign_channels") {
    FmConfig fm;
    auto one = assign_channels(1, fm, 5.0, 1000.0);
    CHECK(one.offsets == std::vector<Hertz>{1000.0});

    auto three = assign_channels(3, fm, 5.0, 1000.0);
    CHECK(three.offsets == std::vector<Hertz>{1000.0, 7000.0, 13000.0});
    CHECK(three.band_width == 5000.0);

    // Each band takes 6000 Hz; 5 * 6000 fits below 32768 Hz, 6 * 6000 does not.
    CHECK_NOTHROW(assign_channels(5, fm, 5.0, 1000.0));
    CHECK_THROWS_AS(assign_channels(6, fm, 5.0, 1000.0), ConfigError);
    CHECK_THROWS_AS(assign_channels(11, fm, 5.0, 1000.0), ConfigError);
    CHECK_THROWS_AS(assign_channels(0, fm, 5.0, 1000.0), ConfigError);
}

TEST_CASE("validate_plan rejects overlapping bands") {
    FmConfig fm;
    FdmaPlan plan{{1000.0, 3000.0}, 5000.0, 1000.0};
    CHECK_THROWS_AS(validate_plan(plan, fm), ConfigError);
    FdmaPlan tight{{1000.0, 6500.0}, 5000.0, 1000.0};
    CHECK_THROWS_AS(validate_plan(tight, fm), ConfigError);
    CHECK_NOTHROW(validate_plan(assign_channels(3, fm, 5.0), fm));
}

TEST_CASE("single sensor, no noise, reduces to the point-to-point chain") {
    FmConfig fm;
    auto s = sensor(0, 0.37, 0.61);
    auto plan = assign_channels(1, fm, 5.0);
    auto res = simulate_cluster({s}, plan, channels(1, INFINITY), ReceiverConfig{});
    REQUIRE(res.size() == 1);
    CHECK(std::abs(res[0].v_hat - res[0].v_true) <= 5e-4 + 1e-12);
    CHECK(std::abs(res[0].decoded.x1_hat - s.truth.x1) <= 5e-4 + 1e-12);
    CHECK(std::abs(res[0].decoded.x2_hat - s.truth.x2) <= s.mapping.delta);
}

TEST_CASE("three disjoint sensors match their solo runs bit for bit") {
    FmConfig fm;
    ReceiverConfig rx;
    // Tones stay off exact half-bin ties, where sidelobe leakage from the
    // neighbouring bands decides the argmax.
    std::vector<SensorNode> sensors{sensor(0, 0.1, 0.9), sensor(1, 0.553, 0.25), sensor(2, 0.93, 0.47)};
    auto plan = assign_channels(3, fm, 5.0);
    auto joint = simulate_cluster(sensors, plan, channels(3, INFINITY), rx);
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        FdmaPlan solo_plan{{plan.offsets[i]}, plan.band_width, plan.guard};
        auto solo = simulate_cluster({sensors[i]}, solo_plan, channels(1, INFINITY), rx);
        CHECK(joint[i].v_hat == solo[0].v_hat);
        CHECK(joint[i].decoded.x1_hat == solo[0].decoded.x1_hat);
        CHECK(joint[i].decoded.x2_hat == solo[0].decoded.x2_hat);
    }
}

TEST_CASE("recovery is independent of the other sensors' values") {
    FmConfig fm;
    ReceiverConfig rx;
    auto plan = assign_channels(3, fm, 5.0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto target = sensor(1, 0.42, 0.58);
    std::vector<SensorNode> base{sensor(0, 0.2, 0.2), target, sensor(2, 0.7, 0.3)};
    auto ref = simulate_cluster(base, plan, channels(3, INFINITY), rx)[1];
    for (int t = 0; t < 5; ++t) {
        std::vector<SensorNode> s{sensor(0, u(rng), u(rng)), target, sensor(2, u(rng), u(rng))};
        auto r = simulate_cluster(s, plan, channels(3, INFINITY), rx)[1];
        CHECK(r.v_hat == ref.v_hat);
    }
}

TEST_CASE("sensors on the same band are rejected") {
    FmConfig fm;
    FdmaPlan plan{{1000.0, 1000.0}, 5000.0, 1000.0};
    std::vector<SensorNode> s{sensor(0, 0.1, 0.1), sensor(1, 0.2, 0.2)};
    CHECK_THROWS_AS(simulate_cluster(s, plan, channels(2, INFINITY), ReceiverConfig{}), ConfigError);
}

TEST_CASE("shared antenna needs a single noise level") {
    FmConfig fm;
    auto plan = assign_channels(2, fm, 5.0);
    std::vector<SensorNode> s{sensor(0, 0.1, 0.1), sensor(1, 0.2, 0.2)};
    auto ch = channels(2, -10.0);
    ch[1].snr_db = -5.0;
    CHECK_THROWS_AS(simulate_cluster(s, plan, ch, ReceiverConfig{}), ConfigError);
    ClusterOptions dedicated;
    dedicated.mode = AntennaMode::Dedicated;
    CHECK_NOTHROW(simulate_cluster(s, plan, ch, ReceiverConfig{}, dedicated));
}

TEST_CASE("per-sensor results are invariant under permutation") {
    FmConfig fm;
    ReceiverConfig rx;
    auto plan = assign_channels(3, fm, 5.0);
    std::vector<SensorNode> sensors{sensor(0, 0.1, 0.9), sensor(1, 0.55, 0.25), sensor(2, 0.93, 0.47)};
    ClusterOptions opts;
    opts.master_seed = 5;
    auto ref = simulate_cluster(sensors, plan, channels(3, -15.0), rx, opts);

    std::vector<std::size_t> perm{2, 0, 1};
    std::vector<SensorNode> ps;
    FdmaPlan pp{{}, plan.band_width, plan.guard};
    for (auto i : perm) {
        ps.push_back(sensors[i]);
        pp.offsets.push_back(plan.offsets[i]);
    }
    auto got = simulate_cluster(ps, pp, channels(3, -15.0), rx, opts);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        CHECK(got[j].id == ref[perm[j]].id);
        CHECK(got[j].v_hat == ref[perm[j]].v_hat);
        CHECK(got[j].decoded.x2_hat == ref[perm[j]].decoded.x2_hat);
    }
}

TEST_CASE("diversity_combine") {
    PowerSpectrum a{{1.0, 5.0, 2.0}, 1.0};
    PowerSpectrum b{{3.0, 1.0, 2.0}, 1.0};
    CHECK(diversity_combine({a}).power == a.power);
    auto same = diversity_combine({a, a});
    CHECK(std::max_element(same.power.begin(), same.power.end()) - same.power.begin() == 1);
    CHECK(diversity_combine({a, b}).power == std::vector<double>{2.0, 3.0, 2.0});
    PowerSpectrum c{{1.0}, 1.0};
    CHECK_THROWS_AS(diversity_combine({a, c}), ConfigError);
    CHECK_THROWS_AS(diversity_combine({}), ConfigError);
}

TEST_CASE("two-antenna combining does not raise the peak error rate at -30 dB") {
    FmConfig fm;
    ReceiverConfig rx;
    auto plan = assign_channels(1, fm, 5.0);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int single_err = 0, combined_err = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        auto s = sensor(0, u(rng), u(rng));
        ClusterOptions one;
        one.master_seed = 900;
        one.trial = static_cast<std::uint64_t>(t);
        ClusterOptions two = one;
        two.mode = AntennaMode::Diversity;
        two.antennas = 2;
        auto r1 = simulate_cluster({s}, plan, channels(1, -30.0), rx, one)[0];
        auto r2 = simulate_cluster({s}, plan, channels(1, -30.0), rx, two)[0];
        if (std::abs(r1.v_hat - r1.v_true) > 1e-3) ++single_err;
        if (std::abs(r2.v_hat - r2.v_true) > 1e-3) ++combined_err;
    }
    MESSAGE("peak errors: single " << single_err << ", combined " << combined_err);
    CHECK(single_err > 0);
    CHECK(combined_err <= single_err);
}
