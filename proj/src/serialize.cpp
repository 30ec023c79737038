#include "spintex/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spintex {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

Json vec3(const Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }
Vector3d vec3_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

Json lattice_to_json(const SpinLattice& lattice) {
    Json j;
    j["dimension"] = lattice.dimension == LatticeDimension::chain_1d ? "1d" : "3d";
    j["seed"] = lattice.seed;
    j["nv_position"] = vec3(lattice.nv_position);
    j["b_field_direction"] = vec3(lattice.b_field_direction);
    Json pos = Json::array();
    for (const auto& p : lattice.positions) pos.push_back(vec3(p));
    j["positions"] = pos;
    Json cpl = Json::array();
    for (const auto& c : lattice.couplings) cpl.push_back(Json::array({c.i, c.j, c.b_hz}));
    j["couplings"] = cpl;
    j["eta"] = lattice.eta;
    return j;
}

SpinLattice lattice_from_json(const Json& j) {
    SpinLattice lattice;
    lattice.dimension = j.at("dimension").get<std::string>() == "1d" ? LatticeDimension::chain_1d
                                                                     : LatticeDimension::diamond_3d;
    lattice.seed = j.at("seed").get<std::uint64_t>();
    lattice.nv_position = vec3_from(j.at("nv_position"));
    lattice.b_field_direction = vec3_from(j.at("b_field_direction"));
    for (const auto& p : j.at("positions")) lattice.positions.push_back(vec3_from(p));
    for (const auto& c : j.at("couplings"))
        lattice.couplings.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<double>()});
    lattice.eta = j.at("eta").get<std::vector<double>>();
    return lattice;
}

namespace {

const char* kind_name(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::SL: return "SL";
        case HamiltonianKind::PI: return "PI";
        case HamiltonianKind::TOGGLING_FULL: return "TOGGLING_FULL";
        case HamiltonianKind::TOY_PI: return "TOY_PI";
        case HamiltonianKind::TOY_PIHALF: return "TOY_PIHALF";
    }
    return "?";
}

HamiltonianKind kind_from(const std::string& s) {
    if (s == "SL") return HamiltonianKind::SL;
    if (s == "PI") return HamiltonianKind::PI;
    if (s == "TOGGLING_FULL") return HamiltonianKind::TOGGLING_FULL;
    if (s == "TOY_PI") return HamiltonianKind::TOY_PI;
    if (s == "TOY_PIHALF") return HamiltonianKind::TOY_PIHALF;
    throw std::invalid_argument("unknown Hamiltonian kind: " + s);
}

}  // namespace

Json hamiltonian_to_json(const EffectiveHamiltonian& h) {
    Json j;
    j["kind"] = kind_name(h.kind);
    j["n_spins"] = h.n_spins;
    Json pairs = Json::array();
    for (const auto& p : h.pairs) {
        Json row = Json::array();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) row.push_back(p.m(r, c));
        pairs.push_back(Json{{"i", p.i}, {"j", p.j}, {"tensor", row}});
    }
    j["pairs"] = pairs;
    Json fields = Json::array();
    for (const auto& f : h.site_fields) fields.push_back(vec3(f));
    j["site_fields"] = fields;
    if (!h.axes.empty()) {
        Json axes = Json::array();
        for (const auto& a : h.axes) axes.push_back(vec3(a));
        j["axes"] = axes;
    }
    return j;
}

EffectiveHamiltonian hamiltonian_from_json(const Json& j) {
    EffectiveHamiltonian h;
    h.kind = kind_from(j.at("kind").get<std::string>());
    h.n_spins = j.at("n_spins").get<int>();
    for (const auto& p : j.at("pairs")) {
        EffectiveHamiltonian::PairTensor t;
        t.i = p.at("i").get<int>();
        t.j = p.at("j").get<int>();
        const auto& row = p.at("tensor");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) t.m(r, c) = row.at(3 * r + c).get<double>();
        h.pairs.push_back(t);
    }
    for (const auto& f : j.at("site_fields")) h.site_fields.push_back(vec3_from(f));
    if (j.contains("axes"))
        for (const auto& a : j.at("axes")) h.axes.push_back(vec3_from(a));
    return h;
}

std::string record_to_csv(const TimeSeriesRecord& record) {
    std::ostringstream out;
    out << "t,observable,index,value\n";
    for (std::size_t i = 0; i < record.times.size(); ++i)
        for (const auto& c : record.channels)
            out << format_double(record.times[i]) << ',' << c.id << ',' << c.index << ','
                << format_double(c.values[i]) << '\n';
    return out.str();
}

TimeSeriesRecord record_from_csv(const std::string& csv) {
    TimeSeriesRecord rec;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("record_from_csv: empty input");
    if (line != "t,observable,index,value")
        throw std::invalid_argument("record_from_csv: unexpected header: " + line);
    double last_t = 0.0;
    bool have_t = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string t_str, id, idx_str, val_str;
        std::getline(ls, t_str, ',');
        std::getline(ls, id, ',');
        std::getline(ls, idx_str, ',');
        std::getline(ls, val_str, ',');
        const double t = std::stod(t_str);
        const int index = std::stoi(idx_str);
        const double value = std::stod(val_str);
        if (!have_t || t != last_t) {
            rec.times.push_back(t);
            last_t = t;
            have_t = true;
        }
        auto* ch = rec.find(id, index);
        if (!ch) ch = &rec.add_channel(id, index);
        ch->values.push_back(value);
    }
    return rec;
}

Json record_summary_to_json(const TimeSeriesRecord& record) {
    Json j;
    j["n_samples"] = record.times.size();
    j["phase_boundaries"] = record.phase_boundaries;
    for (const auto& [key, value] : record.summary) j[key] = value;
    return j;
}

std::string map_to_csv(const PolarizationMap& map) {
    std::ostringstream out;
    out << "r,theta,mean_Ix,count,t\n";
    for (int ir = 0; ir < map.n_r(); ++ir)
        for (int it = 0; it < map.n_theta(); ++it) {
            if (map.count_at(ir, it) == 0) continue;  // empty bins flagged by omission
            const double r = 0.5 * (map.r_edges[ir] + map.r_edges[ir + 1]);
            const double th = 0.5 * (map.theta_edges[it] + map.theta_edges[it + 1]);
            out << format_double(r) << ',' << format_double(th) << ','
                << format_double(map.mean_at(ir, it)) << ',' << map.count_at(ir, it) << ','
                << format_double(map.t) << '\n';
        }
    return out.str();
}

std::string sweep_to_csv(const SweepGrid& grid) {
    std::ostringstream out;
    out << "param,t,value\n";
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        if (!grid.errors[i].empty()) continue;
        const auto& rec = grid.records[i];
        const auto* ch = rec.find("sum_Ix");
        if (!ch) continue;
        for (std::size_t s = 0; s < rec.times.size(); ++s)
            out << format_double(grid.values[i]) << ',' << format_double(rec.times[s]) << ','
                << format_double(ch->values[s]) << '\n';
    }
    return out.str();
}

Json sweep_index_to_json(const SweepGrid& grid) {
    Json cells = Json::array();
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        Json cell;
        cell["value"] = grid.values[i];
        if (!grid.errors[i].empty())
            cell["error"] = grid.errors[i];
        else if (grid.t_zc[i])
            cell["t_zc"] = *grid.t_zc[i];
        else
            cell["t_zc"] = nullptr;
        cells.push_back(cell);
    }
    Json j;
    j["parameter"] = grid.parameter;
    j["cells"] = cells;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace spintex
