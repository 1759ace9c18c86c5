// Times the trajectory sweep: serial reference vs the threaded fan-out at a
// few worker counts, verifying that every variant reproduces the reference
// output exactly.
//
//   bench_sweep [snapshots] [workers ...]      default: 201 snapshots, 1 2 4

#include "hsrchan/cases.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace hsrchan;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool identical(const std::vector<MpcSet>& a, const std::vector<MpcSet>& b)
{
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].los_blocked != b[i].los_blocked || a[i].mpcs.size() != b[i].mpcs.size())
            return false;
        for (size_t k = 0; k < a[i].mpcs.size(); ++k) {
            const Mpc& x = a[i].mpcs[k];
            const Mpc& y = b[i].mpcs[k];
            if (x.power_dbm != y.power_dbm || x.delay_s != y.delay_s ||
                x.phase_rad != y.phase_rad || x.aoa_az_deg != y.aoa_az_deg)
                return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv)
{
    int snapshots = 201;
    std::vector<int> worker_counts = {1, 2, 4};
    if (argc > 1)
        snapshots = std::atoi(argv[1]);
    if (argc > 2) {
        worker_counts.clear();
        for (int i = 2; i < argc; ++i)
            worker_counts.push_back(std::atoi(argv[i]));
    }
    if (snapshots < 2) {
        std::fprintf(stderr, "need at least 2 snapshots\n");
        return 2;
    }

    SimConfig cfg = parse_config("{}");
    cfg.scenario.sample_count = snapshots;
    const Scene sc = build_hsr_scene(cfg.scenario, cfg.rt.tile_area_m2);
    const Terminal& tx = tx_terminal(sc, CaseSpec::Tx::bs);
    const Terminal& rx = rx_terminal(sc, CaseSpec::Rx::tr_ue);

    auto t0 = std::chrono::steady_clock::now();
    const std::vector<MpcSet> ref = sweep_trajectory_serial(sc, tx, rx, cfg.rt);
    const double t_serial = seconds_since(t0);

    size_t paths = 0;
    for (const MpcSet& s : ref)
        paths += s.mpcs.size();
    std::printf("%d snapshots, %zu paths, %zu scatter tiles\n", snapshots, paths, sc.tiles.size());
    std::printf("%-12s %8.2f s  %7.2f ms/snapshot\n", "serial", t_serial,
                1e3 * t_serial / snapshots);

    for (int w : worker_counts) {
        t0 = std::chrono::steady_clock::now();
        const std::vector<MpcSet> out = sweep_trajectory(sc, tx, rx, cfg.rt, w);
        const double t = seconds_since(t0);
        const bool same = identical(ref, out);
        std::printf("%-12s %8.2f s  %7.2f ms/snapshot  speedup %.2fx  %s\n",
                    ("workers=" + std::to_string(w)).c_str(), t, 1e3 * t / snapshots,
                    t_serial / t, same ? "identical" : "MISMATCH");
        if (!same)
            return 1;
    }
    return 0;
}
