#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hent/dephasing.hpp"
#include "hent/entanglement.hpp"
#include "hent/filter.hpp"

using namespace hent;

namespace {

NoiseTrajectory constant_noise(const TimeGrid& g, double eps) {
    return NoiseTrajectory{g, std::vector<double>(g.size(), eps)};
}

DephasingRun small_run(NoiseModel noise, PulseProtocol p, std::size_t n_traj, TimeGrid grid = {8.0, 81}) {
    DephasingRun r;
    r.noise = noise;
    r.protocol = p;
    r.grid = grid;
    r.n_traj = n_traj;
    r.master_seed = 2024;
    return r;
}

double max_dev_from_gaussian(const EntanglementSeries& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        worst = std::max(worst, std::abs(s.concurrence[i] - std::exp(-0.5 * s.x[i] * s.x[i])));
    return worst;
}

}  // namespace

TEST_CASE("phase accumulation with constant noise") {
    const TimeGrid g(8.0, 801);
    const double e0 = 0.731;
    const auto free_phi = accumulate_phase(constant_noise(g, e0), PulseProtocol::free());
    CHECK(free_phi[0] == 0.0);
    for (std::size_t i = 0; i < g.size(); i += 50) CHECK(free_phi[i] == doctest::Approx(e0 * g.at(i)).epsilon(1e-12));

    const auto echo_phi = accumulate_phase(constant_noise(g, e0), PulseProtocol::echo(4.0));
    CHECK(std::abs(echo_phi[800]) < 1e-13);
    CHECK(echo_phi[400] == doctest::Approx(4 * e0).epsilon(1e-12));
    CHECK(echo_phi[600] == doctest::Approx(2 * e0).epsilon(1e-12));

    const auto pdd_phi = accumulate_phase(constant_noise(g, e0), PulseProtocol::pdd(0.5));
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(pdd_phi[100 * k]) < 1e-13);
}

TEST_CASE("phase accumulation includes the deterministic splitting") {
    const TimeGrid g(2.0, 201);
    const auto phi = accumulate_phase(constant_noise(g, 0.0), PulseProtocol::free(), 1.5);
    CHECK(phi.back() == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("phase accumulation rejects off-grid pulses with the time") {
    const TimeGrid g(8.0, 801);
    try {
        accumulate_phase(constant_noise(g, 1.0), PulseProtocol::echo(4.005));
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("4.005") != std::string::npos);
    }
}

TEST_CASE("trajectory state") {
    const StateVector phi0 = bell::phi_plus();
    CHECK(overlap(trajectory_state(phi0, 0.0), phi0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(overlap(trajectory_state(phi0, M_PI), bell::phi_minus()) == doctest::Approx(1.0).epsilon(1e-14));
    for (double phi : {0.1, 1.0, 2.5, 17.0, -3.3}) {
        CHECK(std::abs(concurrence_pure(trajectory_state(phi0, phi)) - 1.0) <= 1e-12);
        CHECK(std::abs(concurrence_pure(trajectory_state(phi0, phi, 3)) - 1.0) <= 1e-12);
    }
    // One pulse on A maps phi+ to psi+ up to a phase.
    CHECK(overlap(trajectory_state(phi0, 0.0, 1), bell::psi_plus()) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("static free decay matches the Gaussian closed form") {
    const DephasingResult r = run(small_run(NoiseModel::static_gaussian(1.0), PulseProtocol::free(), 100000));
    const auto& s = r.series;
    REQUIRE(s.size() == 81);
    CHECK(s.x_label == "sigma*t");
    CHECK(s.concurrence[20] == doctest::Approx(std::exp(-2.0)).epsilon(0.01 / std::exp(-2.0)));
    CHECK(max_dev_from_gaussian(s) <= 0.01);
}

TEST_CASE("static echo refocuses at twice the pulse time") {
    const DephasingResult r = run(small_run(NoiseModel::static_gaussian(1.0), PulseProtocol::echo(4.0), 100000));
    CHECK(r.series.e_f.back() >= 0.99);
    CHECK(r.series.concurrence.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invariants of the averaged state") {
    const DephasingResult r =
        run(small_run(NoiseModel::ornstein_uhlenbeck(1.0, 2.0), PulseProtocol::pdd(0.5), 5000));
    const auto& s = r.series;
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(s.e_av[i] - 1.0) <= 1e-12);
        CHECK(s.e_hidden[i] == doctest::Approx(s.e_av[i] - s.e_f[i]));
        CHECK(std::abs(r.densities[i].matrix().trace() - 1.0) <= 1e-9);
        for (double v : hermitian_eigen(r.densities[i].matrix()).values) CHECK(v >= -1e-10);

        // One coherence pair, of magnitude |<exp(-i phi)>| / 2; C is twice it.
        const ComplexMatrix& m = r.densities[i].matrix();
        std::size_t applied = 0;
        for (double tp : pulse_times(PulseProtocol::pdd(0.5), 8.0)) applied += tp <= s.t[i] + 1e-12 ? 1 : 0;
        const bool pulses_odd = applied % 2 == 1;
        const double coh = pulses_odd ? std::abs(m(1, 2)) : std::abs(m(0, 3));
        const double other = pulses_odd ? std::abs(m(0, 3)) : std::abs(m(1, 2));
        CHECK(other <= 1e-15);
        CHECK(std::abs(coh - 0.5 * std::abs(r.mean_phase_factor[i])) <= 1e-9);
        CHECK(std::abs(s.concurrence[i] - 2 * coh) <= 1e-9);
    }
}

TEST_CASE("local unitaries do not change any reported measure") {
    DephasingRun base = small_run(NoiseModel::ornstein_uhlenbeck(1.0, 5.0), PulseProtocol::echo(4.0), 3000);
    DephasingRun moved = base;
    moved.field_b = {0.3, -1.1, 0.7};
    moved.omega_a = 2.2;
    const auto a = run(base).series, b = run(moved).series;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a.concurrence[i] - b.concurrence[i]) <= 1e-9);
        CHECK(std::abs(a.e_f[i] - b.e_f[i]) <= 1e-8);
        CHECK(std::abs(a.e_av[i] - b.e_av[i]) <= 1e-12);
    }
}

TEST_CASE("stepwise propagator path agrees with the toggling-frame path") {
    for (const PulseProtocol& p : {PulseProtocol::free(), PulseProtocol::echo(4.0), PulseProtocol::pdd(0.8)}) {
        DephasingRun cfg = small_run(NoiseModel::ornstein_uhlenbeck(1.0, 3.0), p, 1500);
        cfg.field_b = {0.4, 0.0, 0.9};
        cfg.omega_a = 0.6;
        DephasingRun step = cfg;
        step.stepwise = true;
        const DephasingResult a = run(cfg), b = run(step);
        for (std::size_t i = 0; i < a.series.size(); ++i) {
            CHECK(std::abs(a.series.concurrence[i] - b.series.concurrence[i]) <= 1e-9);
            CHECK(std::abs(a.series.e_av[i] - b.series.e_av[i]) <= 1e-9);
            CHECK(max_abs_diff(a.densities[i].matrix(), b.densities[i].matrix()) <= 1e-10);
        }
    }
}

TEST_CASE("results do not depend on the worker count") {
    DephasingRun cfg = small_run(NoiseModel::ornstein_uhlenbeck(1.0, 1.0), PulseProtocol::pdd(1.0), 5000);
    cfg.threads = 1;
    const std::string one = to_csv(run(cfg).series);
    for (unsigned w : {2u, 3u, 8u}) {
        cfg.threads = w;
        CHECK(to_csv(run(cfg).series) == one);
    }
}

TEST_CASE("very long correlation time reproduces static noise") {
    const TimeGrid g(8.0, 81);
    const auto s = run(small_run(NoiseModel::ornstein_uhlenbeck(1.0, 1e8 * 8.0), PulseProtocol::free(), 20000, g)).series;
    CHECK(max_dev_from_gaussian(s) <= 0.02);
}

TEST_CASE("more trajectories get closer to the closed form") {
    const auto small = run(small_run(NoiseModel::static_gaussian(1.0), PulseProtocol::free(), 10000)).series;
    const auto large = run(small_run(NoiseModel::static_gaussian(1.0), PulseProtocol::free(), 100000)).series;
    CHECK(max_dev_from_gaussian(large) < max_dev_from_gaussian(small));
}

TEST_CASE("OU echo agrees with the spectral path and orders with memory") {
    const TimeGrid g(8.0, 161);
    const auto mc20 =
        run(small_run(NoiseModel::ornstein_uhlenbeck(1.0, 20.0), PulseProtocol::echo(4.0), 20000, g)).series;
    const double an20 = concurrence_spectral(NoiseModel::ornstein_uhlenbeck(1.0, 20.0), PulseProtocol::echo(4.0), 8.0);
    CHECK(std::abs(mc20.concurrence.back() - an20) <= 0.02);
    const auto mc500 =
        run(small_run(NoiseModel::ornstein_uhlenbeck(1.0, 500.0), PulseProtocol::echo(4.0), 20000, g)).series;
    CHECK(mc20.e_f.back() < mc500.e_f.back());
}

TEST_CASE("run validation") {
    DephasingRun cfg = small_run(NoiseModel::static_gaussian(1.0), PulseProtocol::free(), 0);
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg.n_traj = 10;
    cfg.protocol = PulseProtocol::pdd(0.33);
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg.protocol = PulseProtocol::free();
    cfg.noise = NoiseModel{NoiseKind::OrnsteinUhlenbeck, 1.0, 0.0};
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_CASE("worker count honours the cap") {
    CHECK(worker_count(3) >= 1);
    setenv("HENT_THREADS", "2", 1);
    CHECK(worker_count(8) == 2);
    CHECK(worker_count(1) == 1);
    unsetenv("HENT_THREADS");
    CHECK(worker_count(8) == 8);
}
