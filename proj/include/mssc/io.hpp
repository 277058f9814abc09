#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "mssc/analysis.hpp"
#include "mssc/core.hpp"
#include "mssc/ec.hpp"
#include "mssc/oracles.hpp"
#include "mssc/reduction.hpp"

namespace mssc {

// Instance file schema:
//   { "n_raw": int, "initial_order": [ids front-to-back], "requests": [[ids], ...] }
// Padding is applied on load and never stored.
nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

// Byte-stable serialization: sorted keys, no floats, no whitespace.
std::string canonical_dump(const nlohmann::json& j);

nlohmann::json ec_step_to_json(const EcStepRecord& record);
nlohmann::json wrapped_step_to_json(const WrappedStepRecord& record);

// JSON-lines traces: one header object, then one object per step.
void write_lma_trace(std::ostream& out, const Instance& instance, std::uint64_t seed,
                     const LmaRunTrace& trace);
void write_wrapped_trace(std::ostream& out, const Instance& instance, std::uint64_t seed,
                         const WrappedRun& run);

// Oracle traces use the same JSON-lines layout as algorithm traces, with a
// "solver": "dp-exact" marker and the DP state-space size in the header.
void write_mssc_opt_trace(std::ostream& out, const Instance& instance, const MsscOptTrace& trace);
void write_ec_opt_trace(std::ostream& out, const Instance& instance, const EcOptTrace& trace);
nlohmann::json static_opt_to_json(const StaticOptResult& result);

nlohmann::json audit_report_to_json(const AuditReport& report);

struct TraceVerification {
    bool ok = true;
    std::string algorithm;
    std::uint64_t seed = 0;
    Instance instance;
    int steps = 0;
    std::string failure;  // first mismatch, empty when ok
};

// Replays the trace's (instance, seed) and compares every per-step digest
// and cost against the stored records.
TraceVerification verify_trace_file(const std::string& path);
TraceVerification verify_trace_stream(std::istream& in);

}  // namespace mssc
