#include "spintex/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spintex/classical.hpp"
#include "spintex/evolve.hpp"
#include "spintex/potential.hpp"
#include "spintex/protocol.hpp"
#include "spintex/rng.hpp"
#include "spintex/thermal.hpp"

namespace spintex {

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "state-engineering-1d", "hamiltonian-engineering-1d", "kicked-vs-effective",
        "eth-check",            "crossing-radius",            "classical-3d",
        "thermal-predict",      "sweep"};
    return names;
}

namespace {

double get_or(const Json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}
int get_or_int(const Json& j, const std::string& key, int fallback) {
    return j.contains(key) ? j.at(key).get<int>() : fallback;
}
bool get_or_bool(const Json& j, const std::string& key, bool fallback) {
    return j.contains(key) ? j.at(key).get<bool>() : fallback;
}
std::uint64_t seed_of(const Json& config) {
    return config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0;
}

SpinLattice chain_from(const Json& config, std::uint64_t seed) {
    const Json& c = config.at("chain");
    SpinLattice lattice = build_chain(
        get_or_int(c, "n_spins", 10), get_or(c, "lattice_constant", 1.0),
        get_or(c, "position_jitter", 0.0), get_or(c, "j0", -1.0),
        get_or(c, "disorder", 0.0) * std::abs(get_or(c, "j0", -1.0)), seed,
        get_or(c, "x_offset", -1.0));
    if (c.contains("eta0")) {
        // defect-field profile eta_j = eta0 (x_first/x_j)^3 along the chain
        const double eta0 = c.at("eta0").get<double>();
        const double x0 = lattice.positions.front().z();
        for (int k = 0; k < lattice.n_spins(); ++k) {
            const double x = lattice.positions[k].z();
            lattice.eta[k] = eta0 * (x0 * x0 * x0) / (x * x * x);
        }
    }
    return lattice;
}

PotentialProfile profile_from(const Json& config, const SpinLattice& lattice) {
    const Json& p = config.at("profile");
    const double j0 = std::abs(get_or(config.at("chain"), "j0", -1.0));
    return toy_profile(lattice.n_spins(), get_or_int(p, "n_nv", 0), get_or(p, "delta_theta", 0.0),
                       get_or(p, "phi_max_u", 0.5 * M_PI), get_or(p, "scale", j0),
                       get_or(p, "site_spacing", 1.0));
}

InitialStateSpec init_from(const Json& config, int n_spins) {
    const Json& i = config.at("init");
    const std::string type = i.contains("type") ? i.at("type").get<std::string>() : "uniform";
    if (type == "domain_wall")
        return InitialStateSpec::domain_wall(n_spins, get_or_int(i, "n_plus", 4),
                                             get_or(i, "p_plus", 0.6), get_or_int(i, "n_minus", 6),
                                             get_or(i, "p_minus", -0.2));
    return InitialStateSpec::uniform(n_spins, get_or_int(i, "n_polarized", n_spins),
                                     get_or(i, "p", 0.6));
}

DissipationSpec dissipation_from(const Json& config, const SpinLattice& lattice) {
    if (!config.contains("dissipation")) return {};
    const Json& d = config.at("dissipation");
    const double g = get_or(d, "gamma", 0.0);
    const double gp = get_or(d, "gamma_plus", g);
    const double gm = get_or(d, "gamma_minus", g);
    const double gz = get_or(d, "gamma_z", g);
    const int site = get_or_int(d, "site", 0);
    if (d.contains("mode") && d.at("mode").get<std::string>() == "r6")
        return DissipationSpec::r6_profile(lattice, site, gp, gm, gz);
    return DissipationSpec::single_site(site, gp, gm, gz);
}

PulseSequence sequence_from(const Json& config) {
    const Json& s = config.at("sequence");
    if (s.contains("theta"))
        return PulseSequence::from_kick_angle(s.at("theta").get<double>(),
                                              get_or(s, "rabi", 50e3), get_or(s, "t_dd", 51e-6),
                                              get_or_int(s, "full_turns", 0));
    PulseSequence seq;
    seq.rabi = get_or(s, "rabi", 50e3);
    seq.t_kick = get_or(s, "t_kick", 0.0);
    seq.t_dd = get_or(s, "t_dd", 0.0);
    seq.detuning = get_or(s, "detuning", 0.0);
    return seq;
}

Representation representation_from(const Json& config) {
    const std::string rep =
        config.contains("representation") ? config.at("representation").get<std::string>() : "density";
    return rep == "trajectories" ? Representation::trajectory_bundle
                                 : Representation::density_matrix;
}

ObservableRequest request_from(const Json& config) {
    ObservableRequest req;
    if (!config.contains("observables")) {
        req.site_x = true;
        req.energy = true;
        req.bond_energy = true;
        return req;
    }
    const Json& o = config.at("observables");
    req.total_x = get_or_bool(o, "total_x", true);
    req.site_x = get_or_bool(o, "site_x", true);
    req.site_yz = get_or_bool(o, "site_yz", false);
    req.energy = get_or_bool(o, "energy", true);
    req.bond_energy = get_or_bool(o, "bond_energy", true);
    return req;
}

// ---------------------------------------------------------------------------

ScenarioResult run_hamiltonian_engineering(const Json& config) {
    const std::uint64_t seed = seed_of(config);
    SpinLattice lattice = chain_from(config, seed);
    PotentialProfile profile = profile_from(config, lattice);
    EffectiveHamiltonian h = build_pi_hamiltonian(lattice, std::nullopt, profile);
    InitialStateSpec init = init_from(config, lattice.n_spins());

    const Json& run = config.at("run");
    const Representation rep = representation_from(config);
    QuantumState state = prepare_state(init, lattice.n_spins(), rep,
                                       get_or_int(config, "n_trajectories", 0), seed);

    std::vector<double> grid;
    const double duration = run.at("duration").get<double>();
    const int n_samples = get_or_int(run, "n_samples", 120);
    if (get_or_bool(run, "log_spacing", true))
        grid = log_time_grid(duration * get_or(run, "log_t_min_fraction", 1e-3), duration, n_samples);
    else
        grid = linear_time_grid(duration, n_samples);

    DissipationSpec diss = dissipation_from(config, lattice);
    LindbladOptions opts;
    opts.dt = get_or(run, "dt", 0.0);
    opts.seed = seed;
    ObservableRequest req = request_from(config);
    EvolveResult result = diss.any() ? evolve_lindblad(state, h, diss, grid, req, opts)
                                     : evolve_effective(state, h, grid, req);

    const auto& sum_x = result.record.get("sum_Ix");
    ZeroCrossings zc = zero_crossing(result.record.times, sum_x);
    if (zc.first) result.record.summary["t_zc"] = *zc.first;
    result.record.summary["n_crossings"] = static_cast<double>(zc.all.size());

    EthPrediction eth = eth_profile_pi(h, prepare_state(init, lattice.n_spins(),
                                                        Representation::density_matrix));
    Json summary = record_summary_to_json(result.record);
    summary["eth_beta"] = eth.beta;
    Json eth_profile = Json::array();
    for (const auto& v : eth.site_polarization) eth_profile.push_back(v.x());
    summary["eth_site_Ix"] = eth_profile;
    Json phi = Json::array();
    for (double v : profile.phi) phi.push_back(v);
    summary["profile_phi"] = phi;

    ScenarioResult out;
    out.files["series.csv"] = record_to_csv(result.record);
    out.files["lattice.json"] = lattice_to_json(lattice).dump(2);
    out.files["hamiltonian.json"] = hamiltonian_to_json(h).dump(2);
    out.files["summary.json"] = summary.dump(2);
    out.summary = summary;
    return out;
}

ScenarioResult run_state_engineering(const Json& config) {
    const std::uint64_t seed = seed_of(config);
    SpinLattice lattice = chain_from(config, seed);
    EffectiveHamiltonian h = build_pihalf_hamiltonian(lattice);
    InitialStateSpec init = init_from(config, lattice.n_spins());
    QuantumState state = prepare_state(init, lattice.n_spins(), representation_from(config),
                                       get_or_int(config, "n_trajectories", 0), seed);

    const Json& run = config.at("run");
    ProtocolSpec protocol;
    protocol.lindblad.dt = get_or(run, "dt", 0.0);
    protocol.lindblad.seed = seed;

    ProtocolPhase wait;
    wait.hamiltonian = h;
    wait.duration = get_or(run, "t_wait", 0.0);
    wait.n_samples = get_or_int(run, "n_wait_samples", 20);
    protocol.phases.push_back(wait);

    ProtocolPhase read;
    read.hamiltonian = h;
    read.duration = run.at("duration").get<double>();
    read.n_samples = get_or_int(run, "n_samples", 120);
    read.log_spacing = get_or_bool(run, "log_spacing", false);
    read.dissipation = dissipation_from(config, lattice);
    protocol.phases.push_back(read);

    ObservableRequest req = request_from(config);
    EvolveResult result = run_protocol(protocol, state, lattice, req);

    SweepOptions sw;
    auto t_zc = extract_t_zc(result.record, sw);
    if (t_zc) result.record.summary["t_zc"] = *t_zc;
    const auto& sum_x = result.record.get("sum_Ix");
    double min_x = sum_x.empty() ? 0.0 : sum_x[0];
    for (double v : sum_x) min_x = std::min(min_x, v);
    result.record.summary["min_sum_Ix"] = min_x;

    ScenarioResult out;
    out.files["series.csv"] = record_to_csv(result.record);
    out.files["lattice.json"] = lattice_to_json(lattice).dump(2);
    out.files["summary.json"] = record_summary_to_json(result.record).dump(2);
    out.summary = record_summary_to_json(result.record);
    return out;
}

ScenarioResult run_kicked_vs_effective(const Json& config) {
    const std::uint64_t seed = seed_of(config);
    SpinLattice lattice = chain_from(config, seed);
    PulseSequence seq = sequence_from(config);
    InitialStateSpec init = init_from(config, lattice.n_spins());
    QuantumState state =
        prepare_state(init, lattice.n_spins(), Representation::density_matrix);

    const Json& run = config.at("run");
    const double duration = run.at("duration").get<double>();
    const int n_cycles = static_cast<int>(std::floor(duration / seq.period()));
    auto cycles = sample_cycle_indices(n_cycles, get_or_int(run, "n_samples", 100),
                                       get_or_bool(run, "log_spacing", false));
    ObservableRequest req;
    req.total_x = true;
    req.site_x = true;

    EvolveResult kicked = evolve_kicked(state, lattice, seq, cycles, req);

    bool has_eta = false;
    for (double e : lattice.eta) has_eta |= e != 0.0;
    EffectiveHamiltonian h_eff = has_eta ? build_toggling_hamiltonian(lattice, seq)
                                         : build_sl_hamiltonian(lattice);
    EvolveResult effective = evolve_effective(state, h_eff, kicked.record.times, req);

    double max_dev = 0.0;
    const auto& xk = kicked.record.get("sum_Ix");
    const auto& xe = effective.record.get("sum_Ix");
    for (std::size_t i = 0; i < xk.size(); ++i)
        max_dev = std::max(max_dev, std::abs(xk[i] - xe[i]));

    Json summary;
    summary["max_deviation_total"] = max_dev;
    summary["max_deviation_per_spin"] = max_dev / lattice.n_spins();
    summary["n_cycles"] = n_cycles;
    summary["period"] = seq.period();

    ScenarioResult out;
    out.files["series_kicked.csv"] = record_to_csv(kicked.record);
    out.files["series_effective.csv"] = record_to_csv(effective.record);
    out.files["summary.json"] = summary.dump(2);
    out.summary = summary;
    return out;
}

ScenarioResult run_eth_check(const Json& config) {
    const std::uint64_t seed = seed_of(config);
    SpinLattice lattice = chain_from(config, seed);
    PotentialProfile profile = profile_from(config, lattice);
    EffectiveHamiltonian h = build_pi_hamiltonian(lattice, std::nullopt, profile);
    InitialStateSpec init = init_from(config, lattice.n_spins());
    QuantumState state = prepare_state(init, lattice.n_spins(), Representation::density_matrix);

    const Json& run = config.at("run");
    const double duration = run.at("duration").get<double>();
    std::vector<double> grid = log_time_grid(duration * 1e-3, duration,
                                             get_or_int(run, "n_samples", 100));
    ObservableRequest req;
    req.total_x = true;
    req.site_x = true;
    req.energy = true;
    EvolveResult result = evolve_effective(state, h, grid, req);

    EthPrediction eth = eth_profile_pi(h, state);
    // late-time average over the last decade of the grid
    const double t_from = duration / 10.0;
    std::vector<double> avg(lattice.n_spins(), 0.0);
    int count = 0;
    for (std::size_t i = 0; i < result.record.times.size(); ++i) {
        if (result.record.times[i] < t_from) continue;
        ++count;
        for (int k = 0; k < lattice.n_spins(); ++k)
            avg[k] += result.record.get("site_Ix", k)[i];
    }
    double mad = 0.0, max_pred = 0.0;
    Json sim = Json::array(), pred = Json::array();
    for (int k = 0; k < lattice.n_spins(); ++k) {
        avg[k] /= std::max(1, count);
        mad += std::abs(avg[k] - eth.site_polarization[k].x());
        max_pred = std::max(max_pred, std::abs(eth.site_polarization[k].x()));
        sim.push_back(avg[k]);
        pred.push_back(eth.site_polarization[k].x());
    }
    mad /= lattice.n_spins();

    Json summary;
    summary["eth_beta"] = eth.beta;
    summary["late_time_site_Ix"] = sim;
    summary["eth_site_Ix"] = pred;
    summary["mean_abs_deviation"] = mad;
    summary["max_abs_prediction"] = max_pred;

    ScenarioResult out;
    out.files["series.csv"] = record_to_csv(result.record);
    out.files["summary.json"] = summary.dump(2);
    out.summary = summary;
    return out;
}

ScenarioResult run_crossing_radius(const Json& config) {
    PulseSequence seq = sequence_from(config);
    const double pol = get_or(config, "electron_polarization", 0.1);
    const double density = get_or(config, "spin_density", 1.0);

    auto r_lin = crossing_radius_r0(seq, pol, CrossingModel::linearized);
    auto r_comp = crossing_radius_r0(seq, pol, CrossingModel::composed);

    std::ostringstream csv;
    csv << "theta,r_c_linearized,r_c_composed\n";
    const int n_theta = get_or_int(config, "n_theta", 37);
    for (int i = 0; i < n_theta; ++i) {
        const double theta = M_PI * i / (n_theta - 1);
        const double f = std::cbrt(std::abs(3.0 * std::cos(theta) * std::cos(theta) - 1.0));
        csv << format_double(theta) << ',' << (r_lin ? format_double(*r_lin * f) : "nan") << ','
            << (r_comp ? format_double(*r_comp * f) : "nan") << '\n';
    }

    Json summary;
    summary["kick_angle_mod_2pi"] = seq.kick_angle_mod();
    summary["delta_theta"] = seq.delta_theta();
    if (r_lin) {
        summary["r_c0_linearized"] = *r_lin;
        summary["spins_within_radius"] = spins_within_radius(density, *r_lin);
        summary["crossing_surface_volume"] = crossing_surface_volume(*r_lin);
    } else {
        summary["r_c0_linearized"] = nullptr;
    }
    summary["r_c0_composed"] = r_comp ? Json(*r_comp) : Json(nullptr);

    ScenarioResult out;
    out.files["crossing.csv"] = csv.str();
    out.files["summary.json"] = summary.dump(2);
    out.summary = summary;
    return out;
}

ScenarioResult run_classical(const Json& config) {
    const std::uint64_t seed = seed_of(config);
    const Json& lat = config.at("lattice");
    LatticeSpec spec;
    spec.n_spins = get_or_int(lat, "n_spins", 200);
    spec.occupation_density = get_or(lat, "occupation_density", 0.005);
    spec.lattice_constant = get_or(lat, "lattice_constant", 0.357);
    spec.d_min = get_or(lat, "d_min", 2.0 * spec.lattice_constant);
    spec.r_min = get_or(lat, "r_min", 3.0);

    const Json& field = config.at("field");
    const double pol = get_or(field, "electron_polarization", 0.1);
    const double r_c0 = get_or(field, "r_c0", 3.2);
    const PhysicalConstants constants = PhysicalConstants::carbon13();
    const double shift = -2.0 * pol * constants.K_exp / (r_c0 * r_c0 * r_c0);

    const Json& ens = config.at("ensemble");
    const int n_cfg = get_or_int(ens, "n_configs", 10);
    const int n_traj = get_or_int(ens, "n_trajectories", 30);
    const double mu = get_or(ens, "mu", 1.0);
    const double r_pol = get_or(ens, "r_pol", 3.5);

    ClassicalEnsemble ensemble;
    double coupling_sum = 0.0;
    std::size_t coupling_count = 0;
    for (int c = 0; c < n_cfg; ++c) {
        ClassicalEnsemble::Configuration cfg;
        spec.rng_seed = Rng::derive(seed, 1000 + c).engine()();
        cfg.lattice = sample_diamond_lattice(spec, constants);
        apply_nv_field(cfg.lattice, pol, constants);

        cfg.hamiltonian.kind = HamiltonianKind::PI;
        cfg.hamiltonian.n_spins = cfg.lattice.n_spins();
        cfg.hamiltonian.site_fields.resize(cfg.lattice.n_spins());
        for (int k = 0; k < cfg.lattice.n_spins(); ++k)
            cfg.hamiltonian.site_fields[k] = Eigen::Vector3d(cfg.lattice.eta[k] + shift, 0.0, 0.0);
        for (const auto& b : cfg.lattice.couplings) {
            Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
            m.diagonal() << -b.b_hz, -b.b_hz, 2.0 * b.b_hz;
            cfg.hamiltonian.pairs.push_back({b.i, b.j, m});
            coupling_sum += std::abs(b.b_hz);
            ++coupling_count;
        }
        std::vector<double> mu_profile = domain_wall_mu(cfg.lattice, mu, r_pol);
        for (int m = 0; m < n_traj; ++m)
            cfg.trajectories.push_back(
                heatbath_sample(mu_profile, Rng::derive(seed, 7000 + c * 1000 + m).engine()()));
        ensemble.configs.push_back(std::move(cfg));
    }

    const Json& run = config.at("run");
    const double duration = run.at("duration").get<double>();
    const int n_samples = get_or_int(run, "n_samples", 60);
    std::vector<double> grid = linear_time_grid(duration, n_samples);
    const int n_snap = get_or_int(run, "n_snapshots", 3);
    std::vector<double> snaps;
    for (int i = 1; i <= n_snap; ++i) snaps.push_back(grid[i * n_samples / n_snap]);

    BinSpec bins;
    const Json& b = config.contains("bins") ? config.at("bins") : Json::object();
    bins.n_r = get_or_int(b, "n_r", 10);
    bins.r_min = get_or(b, "r_min", spec.r_min);
    bins.r_max = get_or(b, "r_max", 8.0);
    bins.n_theta = get_or_int(b, "n_theta", 6);
    bins.fold_theta = get_or_bool(b, "fold_theta", true);

    IntegratorOptions iopts;
    iopts.rtol = get_or(run, "rtol", 1e-8);
    const double j_scale = coupling_count > 0 ? coupling_sum / coupling_count : 1.0;
    ClassicalRunResult result = classical_evolve(ensemble, grid, snaps, bins, iopts, j_scale);

    ZeroCrossings zc = zero_crossing(result.record.times, result.record.get("sum_Ix"));

    // fraction of populated bins whose mean follows the applied potential
    const auto& last = result.maps.back();
    long populated = 0, matching = 0;
    const long min_count = get_or_int(config, "bin_min_count", 50);
    for (int ir = 0; ir < last.n_r(); ++ir)
        for (int it = 0; it < last.n_theta(); ++it) {
            if (last.count_at(ir, it) < min_count) continue;
            ++populated;
            const double r = 0.5 * (last.r_edges[ir] + last.r_edges[ir + 1]);
            const double th = 0.5 * (last.theta_edges[it] + last.theta_edges[it + 1]);
            const double ct = std::cos(th);
            const double phi = 2.0 * pol * constants.K_exp * (3.0 * ct * ct - 1.0) / (r * r * r) + shift;
            if (std::signbit(phi) == std::signbit(last.mean_at(ir, it))) ++matching;
        }

    Json summary;
    summary["j_scale"] = j_scale;
    summary["max_norm_drift_rate"] = result.max_norm_drift_rate;
    summary["max_energy_drift_rate"] = result.max_energy_drift_rate;
    summary["t_zc"] = zc.first ? Json(*zc.first) : Json(nullptr);
    summary["populated_bins"] = populated;
    summary["matching_bins"] = matching;
    summary["sign_match_fraction"] = populated > 0 ? static_cast<double>(matching) / populated : 0.0;

    ScenarioResult out;
    out.files["series.csv"] = record_to_csv(result.record);
    for (std::size_t s = 0; s < result.maps.size(); ++s)
        out.files["map_" + std::to_string(s) + ".csv"] = map_to_csv(result.maps[s]);
    out.files["summary.json"] = summary.dump(2);
    out.summary = summary;
    return out;
}

ScenarioResult run_thermal_predict(const Json& config) {
    const Json& p = config.at("profile");
    const int half = get_or_int(p, "half_width", 30000);
    const double j0 = get_or(config, "j0", -0.025);
    PotentialProfile profile =
        toy_profile(2 * half + 1, half, get_or(p, "delta_theta", 0.05 * M_PI),
                    get_or(p, "phi_max_u", 0.5 * M_PI), std::abs(j0));

    const Json& i = config.at("init");
    const int n_p = get_or_int(i, "n_polarized", 11);
    const double pval = get_or(i, "p", 0.6);
    std::vector<double> pn(profile.size(), 0.0);
    for (int k = half - n_p / 2; k <= half + n_p / 2; ++k) pn[k] = pval;

    GibbsCurveParams params;
    params.coupling_j0 = j0;
    params.diffusion = get_or(config, "diffusion", 1.0);
    params.initial_energy =
        chain_initial_energy(profile, pn, j0, get_or_bool(config, "include_p2", false));

    const Json& run = config.at("run");
    std::vector<double> grid = log_time_grid(get_or(run, "t_min", 1e-2),
                                             get_or(run, "t_max", 4e6),
                                             get_or_int(run, "n_samples", 240));
    GibbsPrediction curve = predicted_total_polarization(grid, profile, params);

    Json summary;
    summary["initial_energy"] = params.initial_energy;
    summary["steady_value"] = curve.steady_value;
    summary["t_zc"] = curve.t_zc ? Json(*curve.t_zc) : Json(nullptr);
    summary["plateau"] = curve.total_x.back();
    if (auto rc = profile.crossing_site()) summary["crossing_site"] = *rc;

    ScenarioResult out;
    out.files["series.csv"] = record_to_csv(curve.as_record());
    out.files["summary.json"] = summary.dump(2);
    out.summary = summary;
    return out;
}

ScenarioResult run_sweep(const Json& config);

ScenarioResult dispatch(const Json& config) {
    const std::string scenario = config.at("scenario").get<std::string>();
    if (scenario == "hamiltonian-engineering-1d") return run_hamiltonian_engineering(config);
    if (scenario == "state-engineering-1d") return run_state_engineering(config);
    if (scenario == "kicked-vs-effective") return run_kicked_vs_effective(config);
    if (scenario == "eth-check") return run_eth_check(config);
    if (scenario == "crossing-radius") return run_crossing_radius(config);
    if (scenario == "classical-3d") return run_classical(config);
    if (scenario == "thermal-predict") return run_thermal_predict(config);
    if (scenario == "sweep") return run_sweep(config);
    throw std::invalid_argument("unknown scenario: " + scenario);
}

ScenarioResult run_sweep(const Json& config) {
    const std::string parameter = config.at("parameter").get<std::string>();
    const std::vector<double> values = config.at("values").get<std::vector<double>>();
    const Json base = config.at("base");

    SweepOptions opts;
    opts.from_last_phase = get_or_bool(config, "t_zc_from_last_phase", true);
    SweepGrid grid = sweep(parameter, values, [&](double v) {
        Json cell = base;
        // dotted path a.b.c into the nested config
        Json* node = &cell;
        std::string path = parameter;
        std::size_t dot;
        while ((dot = path.find('.')) != std::string::npos) {
            node = &(*node)[path.substr(0, dot)];
            path = path.substr(dot + 1);
        }
        (*node)[path] = v;
        ScenarioResult r = dispatch(cell);
        return record_from_csv(r.files.at("series.csv"));
    }, opts);

    ScenarioResult out;
    out.files["sweep.csv"] = sweep_to_csv(grid);
    out.files["sweep_index.json"] = sweep_index_to_json(grid).dump(2);
    out.summary = sweep_index_to_json(grid);
    return out;
}

}  // namespace

Json default_config(const std::string& scenario) {
    Json j;
    j["scenario"] = scenario;
    j["seed"] = 1;
    if (scenario == "hamiltonian-engineering-1d") {
        j["chain"] = {{"n_spins", 10}, {"j0", -1.0}, {"disorder", 0.3}};
        j["profile"] = {{"delta_theta", 0.05 * M_PI}, {"phi_max_u", 0.5 * M_PI}, {"n_nv", 0}};
        j["init"] = {{"type", "uniform"}, {"n_polarized", 4}, {"p", 0.6}};
        j["dissipation"] = {{"site", 0}, {"gamma", 1.0}};
        j["run"] = {{"duration", 60.0}, {"n_samples", 120}, {"log_spacing", true}};
    } else if (scenario == "state-engineering-1d") {
        j["chain"] = {{"n_spins", 10}, {"j0", -1.0}, {"disorder", 0.3}};
        j["init"] = {{"type", "domain_wall"}, {"n_plus", 4}, {"p_plus", 0.6},
                     {"n_minus", 6}, {"p_minus", -0.2}};
        j["dissipation"] = {{"site", 0}, {"gamma", 1.0}};
        j["run"] = {{"duration", 30.0}, {"n_samples", 120}, {"t_wait", 0.0}};
    } else if (scenario == "kicked-vs-effective") {
        j["chain"] = {{"n_spins", 8}, {"j0", -1.0}, {"disorder", 0.0}};
        j["init"] = {{"type", "uniform"}, {"n_polarized", 4}, {"p", 0.6}};
        j["sequence"] = {{"theta", M_PI / 2}, {"rabi", 50.0}, {"t_dd", 5e-3}};
        j["run"] = {{"duration", 10.0}, {"n_samples", 100}};
    } else if (scenario == "eth-check") {
        j["chain"] = {{"n_spins", 10}, {"j0", -1.0}, {"disorder", 0.3}};
        j["profile"] = {{"delta_theta", 0.05 * M_PI}, {"phi_max_u", 0.5 * M_PI}};
        j["init"] = {{"type", "uniform"}, {"n_polarized", 4}, {"p", 0.6}};
        j["run"] = {{"duration", 1000.0}, {"n_samples", 120}};
    } else if (scenario == "crossing-radius") {
        j["sequence"] = {{"theta", 0.94 * M_PI}, {"rabi", 47052.6315789474}, {"t_dd", 51e-6},
                         {"full_turns", 4}};
        j["electron_polarization"] = 0.1;
        j["spin_density"] = 1.0;
    } else if (scenario == "classical-3d") {
        j["lattice"] = {{"n_spins", 200}, {"occupation_density", 0.005}, {"r_min", 3.0}};
        j["field"] = {{"electron_polarization", 0.1}, {"r_c0", 3.2}};
        j["ensemble"] = {{"n_configs", 10}, {"n_trajectories", 30}, {"mu", 1.0}, {"r_pol", 3.5}};
        j["run"] = {{"duration", 2.0}, {"n_samples", 60}, {"n_snapshots", 3}};
    } else if (scenario == "thermal-predict") {
        j["profile"] = {{"delta_theta", 0.05 * M_PI}, {"phi_max_u", 0.5 * M_PI},
                        {"half_width", 30000}};
        j["init"] = {{"n_polarized", 11}, {"p", 0.6}};
        j["j0"] = -0.025;
        j["diffusion"] = 1.0;
        j["run"] = {{"t_min", 1e-2}, {"t_max", 4e6}, {"n_samples", 240}};
    } else if (scenario == "sweep") {
        j["parameter"] = "run.t_wait";
        j["values"] = {0.0, 5.0, 10.0, 20.0};
        j["base"] = default_config("state-engineering-1d");
    } else {
        throw std::invalid_argument("unknown scenario: " + scenario);
    }
    return j;
}

ValidationReport validate_config(const Json& config) {
    ValidationReport report;
    auto err = [&](const std::string& m) { report.errors.push_back(m); };
    auto warn = [&](const std::string& m) { report.warnings.push_back(m); };

    if (!config.contains("scenario")) {
        err("scenario: missing");
        return report;
    }
    const std::string scenario = config.at("scenario").get<std::string>();
    bool known = false;
    for (const auto& s : scenario_names()) known |= s == scenario;
    if (!known) {
        err("scenario: unknown name '" + scenario + "'");
        return report;
    }

    if (config.contains("sequence")) {
        const Json& s = config.at("sequence");
        if (get_or(s, "rabi", 0.0) < 0.0) err("sequence.rabi: must be >= 0");
        if (get_or(s, "t_kick", 0.0) < 0.0) err("sequence.t_kick: must be >= 0");
        if (get_or(s, "t_dd", 0.0) < 0.0) err("sequence.t_dd: must be >= 0");
        if (!s.contains("theta") && get_or(s, "t_kick", 0.0) == 0.0)
            warn("sequence.t_kick = 0: kicks degenerate to the identity");
    }
    if (config.contains("chain")) {
        const Json& c = config.at("chain");
        const int n = get_or_int(c, "n_spins", 10);
        if (n < 2) err("chain.n_spins: must be >= 2");
        const std::string rep = config.contains("representation")
                                    ? config.at("representation").get<std::string>()
                                    : "density";
        if (rep == "density" && n > max_density_spins)
            err("chain.n_spins: density-matrix representation limited to " +
                std::to_string(max_density_spins) + " spins");
        if (rep == "trajectories" && n > max_bundle_spins)
            err("chain.n_spins: trajectory representation limited to " +
                std::to_string(max_bundle_spins) + " spins");
    }
    if (config.contains("init")) {
        const Json& i = config.at("init");
        for (const char* key : {"p", "p_plus", "p_minus"})
            if (i.contains(key) && std::abs(i.at(key).get<double>()) > 1.0)
                err(std::string("init.") + key + ": |p| must be <= 1");
    }
    if (config.contains("dissipation")) {
        const Json& d = config.at("dissipation");
        for (const char* key : {"gamma", "gamma_plus", "gamma_minus", "gamma_z"})
            if (d.contains(key) && d.at(key).get<double>() < 0.0)
                err(std::string("dissipation.") + key + ": must be >= 0");
    }
    if (config.contains("run")) {
        const Json& r = config.at("run");
        if (r.contains("duration") && r.at("duration").get<double>() <= 0.0)
            err("run.duration: must be > 0");
        if (get_or(r, "t_wait", 0.0) < 0.0) err("run.t_wait: must be >= 0");
    }
    if (config.contains("lattice")) {
        const Json& l = config.at("lattice");
        LatticeSpec spec;
        spec.n_spins = get_or_int(l, "n_spins", 200);
        spec.occupation_density = get_or(l, "occupation_density", 0.005);
        spec.lattice_constant = get_or(l, "lattice_constant", 0.357);
        spec.d_min = get_or(l, "d_min", 2.0 * spec.lattice_constant);
        spec.r_min = get_or(l, "r_min", 3.0);
        try {
            spec.validate();
        } catch (const std::exception& e) {
            err(std::string("lattice: ") + e.what());
        }
        if (spec.r_min <= 1.7 && scenario == "classical-3d")
            warn("lattice.r_min: inside the frozen-core radius 1.7 nm");
    }
    if (scenario == "sweep") {
        if (!config.contains("parameter")) err("parameter: missing");
        if (!config.contains("values")) err("values: missing");
        if (!config.contains("base"))
            err("base: missing nested scenario config");
        else {
            ValidationReport inner = validate_config(config.at("base"));
            for (const auto& e : inner.errors) report.errors.push_back("base." + e);
            for (const auto& w : inner.warnings) report.warnings.push_back("base." + w);
        }
    }
    return report;
}

ScenarioResult run_scenario(const Json& config) {
    ValidationReport report = validate_config(config);
    if (!report.ok()) {
        std::string msg = "invalid config:";
        for (const auto& e : report.errors) msg += "\n  " + e;
        throw std::invalid_argument(msg);
    }
    return dispatch(config);
}

}  // namespace spintex
