#include "hsrchan/cases.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hsrchan {

namespace {

using nlohmann::json;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Distance written to the artifacts; report reconstructs it with the same
// expression so regenerated files stay bit-identical.
double track_distance(int i, int n, double length_m)
{
    return n > 1 ? (static_cast<double>(i) / static_cast<double>(n - 1)) * length_m : 0.0;
}

struct ParamCol {
    const char* name;
    double SnapshotStats::* field;
};

constexpr ParamCol kParams[] = {
    {"ds_ns", &SnapshotStats::ds_ns},   {"kf_db", &SnapshotStats::kf_db},
    {"asa_deg", &SnapshotStats::asa_deg}, {"asd_deg", &SnapshotStats::asd_deg},
    {"esa_deg", &SnapshotStats::esa_deg}, {"esd_deg", &SnapshotStats::esd_deg},
};

std::vector<double> finite_samples(const std::vector<SnapshotStats>& stats, double SnapshotStats::* field,
                                   std::size_t* excluded)
{
    std::vector<double> out;
    out.reserve(stats.size());
    std::size_t skipped = 0;
    for (const auto& st : stats) {
        double v = st.*field;
        if (std::isfinite(v))
            out.push_back(v);
        else
            ++skipped;
    }
    if (excluded)
        *excluded = skipped;
    return out;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path);
    return os;
}

void close_out(std::ofstream& os, const std::string& path)
{
    os.flush();
    if (!os)
        throw std::runtime_error("write failed: " + path);
}

std::string join_path(const std::string& dir, const std::string& name)
{
    return (std::filesystem::path(dir) / name).string();
}

// ---- JSON helpers -------------------------------------------------------

[[noreturn]] void cfg_err(const std::string& what)
{
    throw std::invalid_argument("config: " + what);
}

void expect_keys(const json& j, const char* where, std::initializer_list<const char*> keys)
{
    if (!j.is_object())
        cfg_err(std::string(where) + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* a : keys)
            if (k == a) { known = true; break; }
        if (!known)
            cfg_err("unknown key '" + k + "' in " + where);
    }
}

template <class T>
void opt(const json& j, const char* key, T& target)
{
    if (j.contains(key))
        target = j.at(key).get<T>();
}

void opt_vec3(const json& j, const char* key, Vec3& target)
{
    if (!j.contains(key))
        return;
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 3)
        cfg_err(std::string("'") + key + "' must be an [x, y, z] array");
    target = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

void opt_pointing(const json& j, const char* key, PointingMode& target)
{
    if (!j.contains(key))
        return;
    std::string s = j.at(key).get<std::string>();
    if (s == "fixed")
        target = PointingMode::fixed;
    else if (s == "track_target")
        target = PointingMode::track_target;
    else
        cfg_err("pointing must be 'fixed' or 'track_target', got '" + s + "'");
}

void parse_terminal(const json& j, const char* where, ScenarioConfig::TerminalCfg& t)
{
    expect_keys(j, where, {"tx_power_dbm", "max_gain_dbi", "beamwidth_deg", "sidelobe_depth_db",
                           "height_m", "position", "pointing"});
    opt(j, "tx_power_dbm", t.tx_power_dbm);
    opt(j, "max_gain_dbi", t.max_gain_dbi);
    opt(j, "beamwidth_deg", t.beamwidth_deg);
    opt(j, "sidelobe_depth_db", t.sidelobe_depth_db);
    opt(j, "height_m", t.height_m);
    opt_vec3(j, "position", t.position);
    opt_pointing(j, "pointing", t.pointing);
}

void parse_scenario(const json& j, ScenarioConfig& s)
{
    if (j.contains("ground")) {
        const json& g = j.at("ground");
        expect_keys(g, "ground", {"x0", "x1", "y0", "y1", "material"});
        opt(g, "x0", s.ground.x0); opt(g, "x1", s.ground.x1);
        opt(g, "y0", s.ground.y0); opt(g, "y1", s.ground.y1);
        opt(g, "material", s.ground.material);
    }
    if (j.contains("wall")) {
        const json& w = j.at("wall");
        expect_keys(w, "wall", {"enabled", "x0", "x1", "y0", "y1", "height", "material"});
        opt(w, "enabled", s.wall.enabled);
        opt(w, "x0", s.wall.x0); opt(w, "x1", s.wall.x1);
        opt(w, "y0", s.wall.y0); opt(w, "y1", s.wall.y1);
        opt(w, "height", s.wall.height);
        opt(w, "material", s.wall.material);
    }
    if (j.contains("bridges")) {
        const json& arr = j.at("bridges");
        if (!arr.is_array())
            cfg_err("'bridges' must be an array");
        s.bridges.clear();
        for (const json& b : arr) {
            expect_keys(b, "bridges[]", {"span0", "span1", "clearance", "thickness", "y0", "y1", "material"});
            ScenarioConfig::BridgeCfg c;
            opt(b, "span0", c.span0); opt(b, "span1", c.span1);
            opt(b, "clearance", c.clearance); opt(b, "thickness", c.thickness);
            opt(b, "y0", c.y0); opt(b, "y1", c.y1);
            opt(b, "material", c.material);
            s.bridges.push_back(c);
        }
    }
    if (j.contains("pylons")) {
        const json& p = j.at("pylons");
        expect_keys(p, "pylons", {"positions", "cross_section", "height", "side_offset", "material"});
        opt(p, "positions", s.pylons.positions);
        opt(p, "cross_section", s.pylons.cross_section);
        opt(p, "height", s.pylons.height);
        opt(p, "side_offset", s.pylons.side_offset);
        opt(p, "material", s.pylons.material);
    }
    if (j.contains("barrier")) {
        const json& b = j.at("barrier");
        expect_keys(b, "barrier", {"enabled", "x0", "x1", "y", "thickness", "height", "material"});
        opt(b, "enabled", s.barrier.enabled);
        opt(b, "x0", s.barrier.x0); opt(b, "x1", s.barrier.x1);
        opt(b, "y", s.barrier.y);
        opt(b, "thickness", s.barrier.thickness);
        opt(b, "height", s.barrier.height);
        opt(b, "material", s.barrier.material);
    }
    if (j.contains("buildings")) {
        const json& arr = j.at("buildings");
        if (!arr.is_array())
            cfg_err("'buildings' must be an array");
        s.buildings.clear();
        for (const json& b : arr) {
            expect_keys(b, "buildings[]", {"x0", "x1", "y0", "y1", "height", "material"});
            ScenarioConfig::BuildingCfg c;
            opt(b, "x0", c.x0); opt(b, "x1", c.x1);
            opt(b, "y0", c.y0); opt(b, "y1", c.y1);
            opt(b, "height", c.height);
            opt(b, "material", c.material);
            s.buildings.push_back(c);
        }
    }
    if (j.contains("terminals")) {
        const json& t = j.at("terminals");
        expect_keys(t, "terminals", {"bs", "tr_ue", "sa", "sa_ue"});
        if (t.contains("bs")) parse_terminal(t.at("bs"), "terminals.bs", s.bs);
        if (t.contains("tr_ue")) parse_terminal(t.at("tr_ue"), "terminals.tr_ue", s.tr_ue);
        if (t.contains("sa")) parse_terminal(t.at("sa"), "terminals.sa", s.sa);
        if (t.contains("sa_ue")) parse_terminal(t.at("sa_ue"), "terminals.sa_ue", s.sa_ue);
    }
    if (j.contains("satellite")) {
        const json& sat = j.at("satellite");
        expect_keys(sat, "satellite", {"elevation_deg", "azimuth_deg", "distance_m"});
        opt(sat, "elevation_deg", s.sat_elevation_deg);
        opt(sat, "azimuth_deg", s.sat_azimuth_deg);
        opt(sat, "distance_m", s.sat_distance_m);
    }
    if (j.contains("materials")) {
        const json& arr = j.at("materials");
        if (!arr.is_array())
            cfg_err("'materials' must be an array");
        for (const json& m : arr) {
            expect_keys(m, "materials[]", {"name", "eps_r", "loss_tangent", "scatter_coeff", "scatter_exponent"});
            if (!m.contains("name"))
                cfg_err("material entry without a name");
            std::string name = m.at("name").get<std::string>();
            auto it = std::find_if(s.materials.begin(), s.materials.end(),
                                   [&](const Material& mm) { return mm.name == name; });
            Material base = it != s.materials.end() ? *it : Material{name, 1.0, 0.0, 0.0, 1.0};
            opt(m, "eps_r", base.eps_r_real);
            opt(m, "loss_tangent", base.loss_tangent);
            opt(m, "scatter_coeff", base.scatter_coeff);
            opt(m, "scatter_exponent", base.scatter_exponent);
            if (it != s.materials.end())
                *it = base;
            else
                s.materials.push_back(base);
        }
    }
    opt(j, "frequency_hz", s.frequency_hz);
    opt(j, "track_length_m", s.track_length_m);
    opt(j, "sample_count", s.sample_count);
    opt(j, "speed_kmh", s.speed_kmh);
}

void parse_attenuation(const json& j, AttenuationParams& a)
{
    expect_keys(j, "attenuation", {"terrestrial_gas_db", "terrestrial_rain_db", "reference_km",
                                   "sat_gas_db", "sat_rain_db", "sat_cloud_db", "sat_scint_db"});
    opt(j, "terrestrial_gas_db", a.terrestrial_gas_db);
    opt(j, "terrestrial_rain_db", a.terrestrial_rain_db);
    opt(j, "reference_km", a.reference_km);
    opt(j, "sat_gas_db", a.sat_gas_db);
    opt(j, "sat_rain_db", a.sat_rain_db);
    opt(j, "sat_cloud_db", a.sat_cloud_db);
    opt(j, "sat_scint_db", a.sat_scint_db);
}

void parse_rt(const json& j, RtParams& r)
{
    expect_keys(j, "rt", {"cutoff_db", "tile_area_m2", "max_reflections", "enable_direct",
                          "enable_reflections", "enable_diffraction", "enable_scattering",
                          "enable_transmission"});
    opt(j, "cutoff_db", r.cutoff_db);
    opt(j, "tile_area_m2", r.tile_area_m2);
    opt(j, "max_reflections", r.max_reflections);
    opt(j, "enable_direct", r.enable_direct);
    opt(j, "enable_reflections", r.enable_reflections);
    opt(j, "enable_diffraction", r.enable_diffraction);
    opt(j, "enable_scattering", r.enable_scattering);
    opt(j, "enable_transmission", r.enable_transmission);
}

// ---- trace parsing ------------------------------------------------------

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& s)
{
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str())
        throw std::runtime_error("malformed number: '" + s + "'");
    return v;
}

} // namespace

// ---- CaseSpec -----------------------------------------------------------

std::string CaseSpec::id() const
{
    std::string s = tx == Tx::bs ? "BS" : "SA";
    s += "2";
    s += rx == Rx::tr_ue ? "TrUE" : "SaUE";
    s += weather == Weather::rainy ? "-R" : "-S";
    return s;
}

CaseSpec CaseSpec::parse(const std::string& id)
{
    for (const CaseSpec& c : all())
        if (c.id() == id)
            return c;
    throw std::invalid_argument("unknown case id '" + id + "'");
}

const std::vector<CaseSpec>& CaseSpec::all()
{
    static const std::vector<CaseSpec> cases = [] {
        std::vector<CaseSpec> v;
        for (Tx tx : {Tx::bs, Tx::sa})
            for (Rx rx : {Rx::tr_ue, Rx::sa_ue})
                for (Weather w : {Weather::rainy, Weather::sunny})
                    v.push_back({tx, rx, w});
        return v;
    }();
    return cases;
}

// ---- configuration ------------------------------------------------------

SimConfig parse_config(const std::string& json_text)
{
    SimConfig cfg;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        cfg_err(e.what());
    }
    expect_keys(j, "top level",
                {"frequency_hz", "track_length_m", "sample_count", "speed_kmh", "ground", "wall",
                 "bridges", "pylons", "barrier", "buildings", "terminals", "satellite", "materials",
                 "attenuation", "rt"});
    try {
        parse_scenario(j, cfg.scenario);
        if (j.contains("attenuation"))
            parse_attenuation(j.at("attenuation"), cfg.attenuation);
        if (j.contains("rt"))
            parse_rt(j.at("rt"), cfg.rt);
    } catch (const json::exception& e) {
        cfg_err(e.what());
    }
    return cfg;
}

SimConfig load_config(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open config " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

// ---- sweeps -------------------------------------------------------------

const Terminal& tx_terminal(const Scene& sc, CaseSpec::Tx tx)
{
    return tx == CaseSpec::Tx::bs ? sc.bs : sc.sa;
}

const Terminal& rx_terminal(const Scene& sc, CaseSpec::Rx rx)
{
    return rx == CaseSpec::Rx::tr_ue ? sc.tr_ue : sc.sa_ue;
}

std::vector<MpcSet> sweep_trajectory_serial(const Scene& sc, const Terminal& tx, const Terminal& rx,
                                            const RtParams& rt)
{
    std::vector<Vec3> samples = sample_trajectory(sc.trajectory);
    std::vector<MpcSet> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out[i] = trace_snapshot(sc, tx, rx, samples[i], static_cast<int>(i), rt);
    return out;
}

std::vector<MpcSet> sweep_trajectory(const Scene& sc, const Terminal& tx, const Terminal& rx,
                                     const RtParams& rt, int workers)
{
    std::vector<Vec3> samples = sample_trajectory(sc.trajectory);
    std::vector<MpcSet> out(samples.size());
    const long long n = static_cast<long long>(samples.size());
    const int threads = std::max(1, workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
#endif
    for (long long i = 0; i < n; ++i)
        out[i] = trace_snapshot(sc, tx, rx, samples[i], static_cast<int>(i), rt);
    (void)threads;
    return out;
}

int default_workers()
{
    if (const char* env = std::getenv("HSRCHAN_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// ---- case assembly ------------------------------------------------------

CaseResult finish_case(const CaseSpec& spec, const Scene& sc, std::vector<MpcSet> raw,
                       const AttenuationParams& at)
{
    CaseResult r;
    r.spec = spec;
    r.excess_db = case_excess_db(at, spec.link_class(), spec.weather);
    const int n = static_cast<int>(raw.size());
    const double length_m = norm(sc.trajectory.end - sc.trajectory.start);
    r.track_m.reserve(raw.size());
    r.snapshots.reserve(raw.size());
    r.stats.reserve(raw.size());
    for (int i = 0; i < n; ++i) {
        double d = track_distance(i, n, length_m);
        r.track_m.push_back(d);
        MpcSet shifted = apply_excess(std::move(raw[i]), r.excess_db);
        SnapshotStats st = snapshot_stats(shifted, d);
        st.snapshot_index = i;
        r.stats.push_back(st);
        r.snapshots.push_back(std::move(shifted));
    }
    return r;
}

CaseResult run_case(const CaseSpec& spec, const SimConfig& cfg, int workers)
{
    Scene sc = build_hsr_scene(cfg.scenario, cfg.rt.tile_area_m2);
    std::vector<MpcSet> raw =
        sweep_trajectory(sc, tx_terminal(sc, spec.tx), rx_terminal(sc, spec.rx), cfg.rt, workers);
    return finish_case(spec, sc, std::move(raw), cfg.attenuation);
}

RunAll run_all(const SimConfig& cfg, int workers)
{
    Scene sc = build_hsr_scene(cfg.scenario, cfg.rt.tile_area_m2);

    // One geometric sweep per (tx, rx) pair; weather only shifts powers.
    struct SweepSlot {
        CaseSpec::Tx tx;
        CaseSpec::Rx rx;
        std::vector<MpcSet> raw;
    };
    std::vector<SweepSlot> sweeps;
    for (CaseSpec::Tx tx : {CaseSpec::Tx::bs, CaseSpec::Tx::sa})
        for (CaseSpec::Rx rx : {CaseSpec::Rx::tr_ue, CaseSpec::Rx::sa_ue})
            sweeps.push_back(
                {tx, rx, sweep_trajectory(sc, tx_terminal(sc, tx), rx_terminal(sc, rx), cfg.rt, workers)});

    RunAll out;
    for (const CaseSpec& spec : CaseSpec::all()) {
        auto it = std::find_if(sweeps.begin(), sweeps.end(),
                               [&](const SweepSlot& s) { return s.tx == spec.tx && s.rx == spec.rx; });
        out.cases.push_back(finish_case(spec, sc, it->raw, cfg.attenuation));
    }

    auto result_of = [&](const std::string& id) -> const CaseResult& {
        for (const CaseResult& r : out.cases)
            if (r.spec.id() == id)
                return r;
        throw std::logic_error("case missing from run_all: " + id);
    };
    auto totals = [](const CaseResult& r) {
        std::vector<double> v;
        v.reserve(r.stats.size());
        for (const SnapshotStats& st : r.stats)
            v.push_back(st.p_total_dbm);
        return v;
    };
    auto pair_series = [&](const std::string& sig, const std::string& intf) {
        SirSeries s = sir_series(totals(result_of(sig)), totals(result_of(intf)));
        s.signal_case = sig;
        s.interference_case = intf;
        return s;
    };
    out.sir_terrestrial_rainy = pair_series("BS2TrUE-R", "SA2TrUE-R");
    out.sir_terrestrial_sunny = pair_series("BS2TrUE-S", "SA2TrUE-S");
    out.sir_satellite_rainy = pair_series("SA2SaUE-R", "BS2SaUE-R");
    out.sir_satellite_sunny = pair_series("SA2SaUE-S", "BS2SaUE-S");
    return out;
}

// ---- artifact writers ---------------------------------------------------

namespace {

void write_trace_csv(const CaseResult& r, const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "snapshot_index,track_distance_m,power_dbm,delay_s,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,chain\n";
    for (std::size_t i = 0; i < r.snapshots.size(); ++i)
        for (const Mpc& m : r.snapshots[i].mpcs)
            os << i << ',' << fmt(r.track_m[i]) << ',' << fmt(m.power_dbm) << ',' << fmt(m.delay_s)
               << ',' << fmt(m.aod_az_deg) << ',' << fmt(m.aod_el_deg) << ',' << fmt(m.aoa_az_deg)
               << ',' << fmt(m.aoa_el_deg) << ',' << chain_to_string(m.chain) << '\n';
    close_out(os, path);
}

void write_stats_csv(const CaseResult& r, const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "snapshot_index,track_distance_m,p_los_dbm,p_nlos_dbm,p_total_dbm,ds_ns,kf_db,asa_deg,asd_deg,esa_deg,esd_deg\n";
    for (const SnapshotStats& st : r.stats)
        os << st.snapshot_index << ',' << fmt(st.track_distance_m) << ',' << fmt(st.p_los_dbm) << ','
           << fmt(st.p_nlos_dbm) << ',' << fmt(st.p_total_dbm) << ',' << fmt(st.ds_ns) << ','
           << fmt(st.kf_db) << ',' << fmt(st.asa_deg) << ',' << fmt(st.asd_deg) << ','
           << fmt(st.esa_deg) << ',' << fmt(st.esd_deg) << '\n';
    close_out(os, path);
}

void write_cdf_csv(const CaseResult& r, const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "parameter,value,cdf\n";
    for (const ParamCol& p : kParams) {
        std::size_t excluded = 0;
        std::vector<double> samples = finite_samples(r.stats, p.field, &excluded);
        if (excluded > 0)
            std::cerr << r.spec.id() << " " << p.name << ": excluded " << excluded
                      << " non-finite samples from CDF\n";
        if (samples.empty())
            continue;
        for (const auto& [value, prob] : empirical_cdf(std::move(samples)))
            os << p.name << ',' << fmt(value) << ',' << fmt(prob) << '\n';
    }
    close_out(os, path);
}

void append_fit_rows(std::ofstream& os, const CaseResult& r)
{
    for (const ParamCol& p : kParams) {
        std::vector<double> samples = finite_samples(r.stats, p.field, nullptr);
        double mu = std::numeric_limits<double>::quiet_NaN();
        double sigma = std::numeric_limits<double>::quiet_NaN();
        if (samples.size() >= 2) {
            NormalFit f = fit_normal(samples);
            mu = f.mu;
            sigma = f.sigma;
        }
        os << r.spec.id() << ',' << p.name << ',' << fmt(mu) << ',' << fmt(sigma) << ','
           << samples.size() << '\n';
    }
}

void write_fits_csv(const std::vector<const CaseResult*>& cases, const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "case,parameter,mu,sigma,n_samples\n";
    for (const CaseResult* r : cases)
        append_fit_rows(os, *r);
    close_out(os, path);
}

void write_summaries(const CaseResult& r, const std::string& out_dir)
{
    write_stats_csv(r, join_path(out_dir, r.spec.id() + "_stats.csv"));
    write_cdf_csv(r, join_path(out_dir, r.spec.id() + "_cdf.csv"));
    write_fits_csv({&r}, join_path(out_dir, r.spec.id() + "_fits.csv"));
}

void write_sir_csv(const SirSeries& s, const CaseResult& signal, const CaseResult& interference,
                   const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "snapshot_index,track_distance_m,p_signal_dbm,p_interference_dbm,sir_db\n";
    for (std::size_t i = 0; i < s.values_db.size(); ++i)
        os << i << ',' << fmt(signal.track_m[i]) << ',' << fmt(signal.stats[i].p_total_dbm) << ','
           << fmt(interference.stats[i].p_total_dbm) << ',' << fmt(s.values_db[i]) << '\n';
    close_out(os, path);
}

void write_coverage_csv(const RunAll& all, const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "system,weather,threshold_db,coverage,excluded\n";
    struct Row {
        const char* system;
        const char* weather;
        const SirSeries* series;
    };
    const Row rows[] = {
        {"terrestrial", "rainy", &all.sir_terrestrial_rainy},
        {"terrestrial", "sunny", &all.sir_terrestrial_sunny},
        {"satellite", "rainy", &all.sir_satellite_rainy},
        {"satellite", "sunny", &all.sir_satellite_sunny},
    };
    for (const Row& row : rows)
        for (double threshold : {0.0, 40.0}) {
            std::size_t excluded = 0;
            double cov = coverage_probability(*row.series, threshold, &excluded);
            os << row.system << ',' << row.weather << ',' << fmt(threshold) << ',' << fmt(cov)
               << ',' << excluded << '\n';
        }
    close_out(os, path);
}

void write_weather_delta_csv(const RunAll& all, const std::vector<double>& track_m,
                             const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "system,snapshot_index,track_distance_m,delta_db\n";
    struct Row {
        const char* system;
        const SirSeries* rainy;
        const SirSeries* sunny;
    };
    const Row rows[] = {
        {"terrestrial", &all.sir_terrestrial_rainy, &all.sir_terrestrial_sunny},
        {"satellite", &all.sir_satellite_rainy, &all.sir_satellite_sunny},
    };
    for (const Row& row : rows) {
        std::vector<double> delta = weather_delta(*row.rainy, *row.sunny);
        for (std::size_t i = 0; i < delta.size(); ++i)
            os << row.system << ',' << i << ',' << fmt(track_m[i]) << ',' << fmt(delta[i]) << '\n';
    }
    close_out(os, path);
}

void write_meta_csv(const std::vector<const CaseResult*>& cases, const SimConfig& cfg,
                    const std::string& path)
{
    std::ofstream os = open_out(path);
    os << "case_id,snapshot_count,track_length_m,excess_db,frequency_hz\n";
    for (const CaseResult* r : cases)
        os << r->spec.id() << ',' << r->snapshots.size() << ',' << fmt(cfg.scenario.track_length_m)
           << ',' << fmt(r->excess_db) << ',' << fmt(cfg.scenario.frequency_hz) << '\n';
    close_out(os, path);
}

} // namespace

void write_case_artifacts(const CaseResult& r, const std::string& out_dir)
{
    std::filesystem::create_directories(out_dir);
    write_trace_csv(r, join_path(out_dir, r.spec.id() + "_trace.csv"));
    write_summaries(r, out_dir);
}

void write_case_meta(const CaseResult& r, const SimConfig& cfg, const std::string& out_dir)
{
    std::filesystem::create_directories(out_dir);
    write_meta_csv({&r}, cfg, join_path(out_dir, "run_meta.csv"));
}

void write_run_artifacts(const RunAll& all, const SimConfig& cfg, const std::string& out_dir)
{
    std::filesystem::create_directories(out_dir);
    std::vector<const CaseResult*> ptrs;
    for (const CaseResult& r : all.cases) {
        write_case_artifacts(r, out_dir);
        ptrs.push_back(&r);
    }
    write_fits_csv(ptrs, join_path(out_dir, "fits.csv"));

    auto result_of = [&](const std::string& id) -> const CaseResult& {
        for (const CaseResult& r : all.cases)
            if (r.spec.id() == id)
                return r;
        throw std::logic_error("case missing from run_all: " + id);
    };
    write_sir_csv(all.sir_terrestrial_rainy, result_of("BS2TrUE-R"), result_of("SA2TrUE-R"),
                  join_path(out_dir, "sir_terrestrial.csv"));
    write_sir_csv(all.sir_satellite_rainy, result_of("SA2SaUE-R"), result_of("BS2SaUE-R"),
                  join_path(out_dir, "sir_satellite.csv"));
    write_coverage_csv(all, join_path(out_dir, "coverage.csv"));
    write_weather_delta_csv(all, all.cases.front().track_m, join_path(out_dir, "weather_delta.csv"));
    write_meta_csv(ptrs, cfg, join_path(out_dir, "run_meta.csv"));
}

// ---- report-from-traces -------------------------------------------------

std::vector<MpcSet> read_trace_csv(const std::string& path, int snapshot_count)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open trace " + path);
    std::vector<MpcSet> sets(static_cast<std::size_t>(snapshot_count));
    for (int i = 0; i < snapshot_count; ++i)
        sets[i].snapshot_index = i;
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f = split_csv(line);
        if (f.size() != 9)
            throw std::runtime_error("malformed trace row in " + path + ": '" + line + "'");
        long idx = std::strtol(f[0].c_str(), nullptr, 10);
        if (idx < 0 || idx >= snapshot_count)
            throw std::runtime_error("snapshot index out of range in " + path + ": " + f[0]);
        Mpc m;
        m.power_dbm = parse_double(f[2]);
        m.delay_s = parse_double(f[3]);
        m.aod_az_deg = parse_double(f[4]);
        m.aod_el_deg = parse_double(f[5]);
        m.aoa_az_deg = parse_double(f[6]);
        m.aoa_el_deg = parse_double(f[7]);
        m.chain = chain_from_string(f[8]);
        sets[static_cast<std::size_t>(idx)].mpcs.push_back(std::move(m));
    }
    for (MpcSet& s : sets) {
        bool has_direct = false;
        for (const Mpc& m : s.mpcs)
            has_direct |= m.chain.size() == 1 && m.chain[0].kind == ChainStep::Kind::direct;
        s.los_blocked = !has_direct;
    }
    return sets;
}

void report_from_traces(const std::string& dir)
{
    const std::string meta_path = join_path(dir, "run_meta.csv");
    std::ifstream is(meta_path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + meta_path);

    struct MetaRow {
        std::string case_id;
        int snapshots = 0;
        double track_length_m = 0.0;
        double excess_db = 0.0;
        double frequency_hz = 0.0;
    };
    std::vector<MetaRow> meta;
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f = split_csv(line);
        if (f.size() != 5)
            throw std::runtime_error("malformed run_meta row: '" + line + "'");
        MetaRow row;
        row.case_id = f[0];
        row.snapshots = static_cast<int>(std::strtol(f[1].c_str(), nullptr, 10));
        row.track_length_m = parse_double(f[2]);
        row.excess_db = parse_double(f[3]);
        row.frequency_hz = parse_double(f[4]);
        if (row.snapshots <= 0)
            throw std::runtime_error("invalid snapshot count in run_meta for " + row.case_id);
        meta.push_back(std::move(row));
    }
    if (meta.empty())
        throw std::runtime_error("run_meta.csv lists no cases");

    std::vector<CaseResult> cases;
    for (const MetaRow& row : meta) {
        CaseResult r;
        r.spec = CaseSpec::parse(row.case_id);
        r.excess_db = row.excess_db;
        r.snapshots = read_trace_csv(join_path(dir, row.case_id + "_trace.csv"), row.snapshots);
        for (int i = 0; i < row.snapshots; ++i) {
            double d = track_distance(i, row.snapshots, row.track_length_m);
            r.track_m.push_back(d);
            SnapshotStats st = snapshot_stats(r.snapshots[static_cast<std::size_t>(i)], d);
            st.snapshot_index = i;
            r.stats.push_back(st);
        }
        cases.push_back(std::move(r));
        write_summaries(cases.back(), dir);
    }

    auto find_case = [&](const std::string& id) -> const CaseResult* {
        for (const CaseResult& r : cases)
            if (r.spec.id() == id)
                return &r;
        return nullptr;
    };
    if (cases.size() != CaseSpec::all().size())
        return; // partial run: per-case summaries only

    RunAll all;
    for (const CaseSpec& spec : CaseSpec::all()) {
        const CaseResult* r = find_case(spec.id());
        if (!r)
            return; // duplicate meta rows: per-case summaries only
        all.cases.push_back(*r);
    }
    auto totals = [](const CaseResult& r) {
        std::vector<double> v;
        for (const SnapshotStats& st : r.stats)
            v.push_back(st.p_total_dbm);
        return v;
    };
    auto pair_series = [&](const std::string& sig, const std::string& intf) {
        SirSeries s = sir_series(totals(*find_case(sig)), totals(*find_case(intf)));
        s.signal_case = sig;
        s.interference_case = intf;
        return s;
    };
    all.sir_terrestrial_rainy = pair_series("BS2TrUE-R", "SA2TrUE-R");
    all.sir_terrestrial_sunny = pair_series("BS2TrUE-S", "SA2TrUE-S");
    all.sir_satellite_rainy = pair_series("SA2SaUE-R", "BS2SaUE-R");
    all.sir_satellite_sunny = pair_series("SA2SaUE-S", "BS2SaUE-S");

    std::vector<const CaseResult*> ptrs;
    for (const CaseResult& r : all.cases)
        ptrs.push_back(&r);
    write_fits_csv(ptrs, join_path(dir, "fits.csv"));
    write_sir_csv(all.sir_terrestrial_rainy, *find_case("BS2TrUE-R"), *find_case("SA2TrUE-R"),
                  join_path(dir, "sir_terrestrial.csv"));
    write_sir_csv(all.sir_satellite_rainy, *find_case("SA2SaUE-R"), *find_case("BS2SaUE-R"),
                  join_path(dir, "sir_satellite.csv"));
    write_coverage_csv(all, join_path(dir, "coverage.csv"));
    write_weather_delta_csv(all, all.cases.front().track_m, join_path(dir, "weather_delta.csv"));
}

} // namespace hsrchan
