#include "hsrchan/cases.hpp"

#include "CLI11.hpp"

#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace {

// 0 success, 1 runtime/I-O failure, 2 usage/configuration error.
enum ExitCode { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

} // namespace

int main(int argc, char** argv)
{
    using namespace hsrchan;

    CLI::App app{"Railway satellite-terrestrial radio channel simulator"};
    app.require_subcommand(1);

    std::string case_id, scene_path, out_dir, in_dir;
    bool all_cases = false;
    int workers = 0;
    std::optional<double> cutoff_db, tile_m2;

    CLI::App* sim = app.add_subcommand("simulate", "Trace a case (or all of them) and write CSV artifacts");
    sim->add_option("--case", case_id, "Case id, e.g. BS2TrUE-R");
    sim->add_flag("--all", all_cases, "Run all eight cases plus the interference reports");
    sim->add_option("--scene", scene_path, "JSON file with scene/parameter overrides");
    sim->add_option("--out", out_dir, "Output directory")->required();
    sim->add_option("--workers", workers, "Worker threads (default: HSRCHAN_WORKERS, else hardware)");
    sim->add_option("--cutoff-db", cutoff_db, "Keep paths within this many dB of the strongest");
    sim->add_option("--tile-m2", tile_m2, "Scattering tile area in square meters");

    CLI::App* rep = app.add_subcommand("report", "Regenerate summary CSVs from existing traces");
    rep->add_option("--in", in_dir, "Directory with run_meta.csv and *_trace.csv files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (sim->parsed()) {
            if (all_cases == !case_id.empty()) {
                std::cerr << "error: pass exactly one of --case and --all\n";
                return kUsageError;
            }
            SimConfig cfg = scene_path.empty() ? SimConfig{} : load_config(scene_path);
            if (cutoff_db)
                cfg.rt.cutoff_db = *cutoff_db;
            if (tile_m2)
                cfg.rt.tile_area_m2 = *tile_m2;
            const int w = workers > 0 ? workers : default_workers();
            if (all_cases) {
                std::cerr << "tracing all cases (" << cfg.scenario.sample_count << " snapshots, "
                          << w << " workers)\n";
                RunAll run = run_all(cfg, w);
                write_run_artifacts(run, cfg, out_dir);
            } else {
                CaseSpec spec = CaseSpec::parse(case_id);
                std::cerr << "tracing " << spec.id() << " (" << cfg.scenario.sample_count
                          << " snapshots, " << w << " workers)\n";
                CaseResult r = run_case(spec, cfg, w);
                write_case_artifacts(r, out_dir);
                write_case_meta(r, cfg, out_dir);
            }
            std::cerr << "wrote " << out_dir << "\n";
        } else if (rep->parsed()) {
            report_from_traces(in_dir);
            std::cerr << "regenerated summaries in " << in_dir << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kOk;
}
