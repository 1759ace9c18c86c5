#pragma once

#include "hsrchan/attenuation.hpp"
#include "hsrchan/chanstats.hpp"
#include "hsrchan/interference.hpp"

#include <string>
#include <vector>

namespace hsrchan {

/// One analysis case: which end transmits, which UE receives, which weather.
struct CaseSpec {
    enum class Tx { bs, sa };
    enum class Rx { tr_ue, sa_ue };

    Tx tx = Tx::bs;
    Rx rx = Rx::tr_ue;
    Weather weather = Weather::rainy;

    /// Canonical id, e.g. "BS2TrUE-R".
    std::string id() const;
    LinkClass link_class() const { return tx == Tx::bs ? LinkClass::terrestrial : LinkClass::satellite; }

    /// Throws std::invalid_argument on anything but the eight canonical ids.
    static CaseSpec parse(const std::string& id);

    /// All eight cases: tx-major, then rx, then rainy before sunny.
    static const std::vector<CaseSpec>& all();
};

struct SimConfig {
    ScenarioConfig scenario;
    AttenuationParams attenuation;
    RtParams rt;
};

/// JSON overrides layered onto the built-in defaults. Unknown keys are
/// rejected; materials merge by name. parse_config takes the raw text.
SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);

const Terminal& tx_terminal(const Scene& sc, CaseSpec::Tx tx);
const Terminal& rx_terminal(const Scene& sc, CaseSpec::Rx rx);

/// Per-snapshot traces along the trajectory. The serial form is the reference
/// implementation; the other fans snapshots out across `workers` threads and
/// must produce bit-identical results.
std::vector<MpcSet> sweep_trajectory_serial(const Scene& sc, const Terminal& tx, const Terminal& rx,
                                            const RtParams& rt);
std::vector<MpcSet> sweep_trajectory(const Scene& sc, const Terminal& tx, const Terminal& rx,
                                     const RtParams& rt, int workers);

/// HSRCHAN_WORKERS, else the hardware thread count, floored at 1.
int default_workers();

struct CaseResult {
    CaseSpec spec;
    double excess_db = 0.0;
    std::vector<double> track_m;       // distance of each snapshot along the track
    std::vector<MpcSet> snapshots;     // excess attenuation applied
    std::vector<SnapshotStats> stats;
};

/// Applies the case's excess attenuation to a raw geometric sweep and derives
/// the per-snapshot statistics.
CaseResult finish_case(const CaseSpec& spec, const Scene& sc, std::vector<MpcSet> raw,
                       const AttenuationParams& at);

/// Builds the scene and runs one case end to end.
CaseResult run_case(const CaseSpec& spec, const SimConfig& cfg, int workers);

struct RunAll {
    std::vector<CaseResult> cases; // CaseSpec::all() order
    SirSeries sir_terrestrial_rainy, sir_terrestrial_sunny; // signal BS2TrUE vs SA2TrUE
    SirSeries sir_satellite_rainy, sir_satellite_sunny;     // signal SA2SaUE vs BS2SaUE
};

/// All eight cases off four shared geometric sweeps, plus both systems' SIR
/// series for each weather.
RunAll run_all(const SimConfig& cfg, int workers);

/// <id>_trace.csv, <id>_stats.csv, <id>_cdf.csv, <id>_fits.csv.
void write_case_artifacts(const CaseResult& r, const std::string& out_dir);

/// Per-case artifacts for every case plus fits.csv, sir_terrestrial.csv,
/// sir_satellite.csv (rainy series), coverage.csv (thresholds 0 and 40 dB,
/// both weathers), weather_delta.csv, run_meta.csv.
void write_run_artifacts(const RunAll& all, const SimConfig& cfg, const std::string& out_dir);

/// run_meta.csv for a standalone case run, so `report` can rebuild summaries.
void write_case_meta(const CaseResult& r, const SimConfig& cfg, const std::string& out_dir);

/// Reads run_meta.csv and the trace files in `dir` and regenerates every
/// derived artifact (stats, CDFs, fits, SIR, coverage, weather delta)
/// without re-tracing. Throws std::runtime_error on missing inputs.
void report_from_traces(const std::string& dir);

/// Parses one trace file back into per-snapshot sets (phases are not stored).
std::vector<MpcSet> read_trace_csv(const std::string& path, int snapshot_count);

} // namespace hsrchan
