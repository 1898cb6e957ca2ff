#ifndef SYNOVIA_RUN_IO_HPP
#define SYNOVIA_RUN_IO_HPP

#include <string>

#include "synovia/field.hpp"
#include "synovia/solver.hpp"
#include "synovia/verify.hpp"

namespace synovia {

/// TORF binary snapshot: 32-byte header (magic "TORF", version u32,
/// dim u32, n u32, rank u32, 12 reserved bytes), then little-endian f64
/// samples, row-major, component-major. rank encodes FieldKind.
void write_torf(const std::string& path, const Field& f);

FieldKind peek_torf_kind(const std::string& path);
ScalarField read_torf_scalar(const std::string& path);
VectorField read_torf_vector(const std::string& path);
SymTensorField read_torf_sym_tensor(const std::string& path);

/// energies.csv: one wide row per monitor sample
/// (t,kinetic,ip,jp,dbar_s,dtv2,gradc_q,dtc_q,zeta,modular_gradv,mass_c).
void write_energies_csv(const std::string& path, const std::vector<EnergyReport>& rows);
std::vector<EnergyReport> read_energies_csv(const std::string& path);

/// balance.csv: long format, one row per (t, quantity, value).
void write_balance_csv(const std::string& path, const std::vector<BalanceSample>& balance);
std::vector<BalanceSample> read_balance_csv(const std::string& path);

/// delta.csv of a twin run: t, delta, weighted_diff.
void write_contraction_csv(const std::string& path, const ContractionReport& rep);

/// Key-value text document plus a CSV of the lhs/rhs series.
void write_inequality_report(const std::string& dir, const InequalityReport& rep);

/// Write rows, balance and snapshots under `dir` (creates directories).
/// Returns the list of files written.
std::vector<std::string> write_run_report(const std::string& dir, const RunReport& report);

/// Rebuild rows and balance series from a directory written by
/// write_run_report; snapshots and termination are not restored.
RunReport load_run_report(const std::string& dir);

}  // namespace synovia

#endif
