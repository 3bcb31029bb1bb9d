// Command line front end: replay a trace against a responder registry,
// synthesize scenario traces, and merge replay reports.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crashlink/io.hpp"
#include "crashlink/modem_sim.hpp"
#include "crashlink/pipeline.hpp"
#include "crashlink/synth.hpp"

namespace {

constexpr int kExitDataError = 2;

void print_error(const crashlink::Error& err) {
    if (err.line > 0) {
        std::fprintf(stderr, "error: %s: %s (line %ld)\n",
                     crashlink::to_string(err.code), err.message.c_str(), err.line);
    } else {
        std::fprintf(stderr, "error: %s: %s\n", crashlink::to_string(err.code),
                     err.message.c_str());
    }
}

// Unwraps a Result or exits with a data error.
template <typename T>
T unwrap(crashlink::Result<T> result) {
    if (!result.ok()) {
        print_error(result.error());
        std::exit(kExitDataError);
    }
    return std::move(result).take();
}

void write_or_die(const std::string& path, std::string_view content) {
    if (auto err = crashlink::write_file(path, content)) {
        print_error(*err);
        std::exit(kExitDataError);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"accident detection and notification trace tool"};
    app.require_subcommand(1);

    // replay
    std::string trace_path;
    std::string registry_path;
    std::string config_path;
    std::string fault_path;
    std::string report_path;
    std::string transcript_path;
    bool quiet = false;
    auto* replay = app.add_subcommand("replay", "run a trace through the pipeline");
    replay->add_option("--trace", trace_path, "sensor trace file")->required();
    replay->add_option("--registry", registry_path, "responder registry csv")->required();
    replay->add_option("--config", config_path, "pipeline config json");
    replay->add_option("--fault-script", fault_path, "modem fault script");
    replay->add_option("--report", report_path, "write the replay report here");
    replay->add_option("--transcript", transcript_path, "write modem transcripts here");
    replay->add_flag("--quiet", quiet, "suppress the event log");

    // synth
    std::string scenario_name;
    std::uint32_t seed = 0;
    std::string out_path;
    auto* synth = app.add_subcommand("synth", "generate a scenario trace");
    synth->add_option("--scenario", scenario_name,
                      "clean_crash | no_gps_crash | spike_crash | proximity_only | quiet")
        ->required();
    synth->add_option("--seed", seed, "generator seed")->required();
    synth->add_option("--out", out_path, "trace file to write")->required();

    // metrics
    std::vector<std::string> report_paths;
    std::string merged_out;
    auto* metrics = app.add_subcommand("metrics", "merge replay reports");
    metrics->add_option("--reports", report_paths, "replay report files")
        ->required()
        ->expected(-1);
    metrics->add_option("--out", merged_out, "write the merged report here");

    CLI11_PARSE(app, argc, argv);

    if (replay->parsed()) {
        auto trace = unwrap(crashlink::trace::load_trace(trace_path));
        auto registry = unwrap(crashlink::geo_notify::load_registry(registry_path));
        crashlink::pipeline::PipelineConfig cfg;
        if (!config_path.empty()) {
            cfg = unwrap(crashlink::pipeline::load_config(config_path));
        }
        crashlink::gsm::FaultScript faults;
        if (!fault_path.empty()) {
            faults = unwrap(crashlink::gsm::load_fault_script(fault_path));
        }

        crashlink::gsm::ModemSim modem(faults);
        crashlink::gsm::SimTransport transport(modem);
        auto result = crashlink::pipeline::run(trace, cfg, registry, transport);

        if (!quiet) {
            for (const auto& line : result.log) {
                std::printf("%s\n", line.c_str());
            }
        }
        auto report = crashlink::pipeline::make_report(result, trace);
        std::string report_text = report.to_text();
        if (report_path.empty()) {
            std::fputs(report_text.c_str(), stdout);
        } else {
            write_or_die(report_path, report_text);
        }
        if (!transcript_path.empty()) {
            write_or_die(transcript_path,
                         crashlink::pipeline::format_transcripts(result.deliveries));
        }
        return 0;
    }

    if (synth->parsed()) {
        auto scenario = unwrap(crashlink::synth::scenario_from_string(scenario_name));
        auto trace = crashlink::synth::synthesize_trace(scenario, seed);
        write_or_die(out_path, crashlink::trace::serialize_trace(trace));
        return 0;
    }

    if (metrics->parsed()) {
        std::vector<crashlink::pipeline::ReplayReport> reports;
        reports.reserve(report_paths.size());
        for (const auto& path : report_paths) {
            reports.push_back(unwrap(crashlink::pipeline::ReplayReport::load(path)));
        }
        auto merged = crashlink::pipeline::merge_reports(reports);
        std::string text = merged.to_text();
        if (merged_out.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            write_or_die(merged_out, text);
        }
        return 0;
    }

    return 0;
}
