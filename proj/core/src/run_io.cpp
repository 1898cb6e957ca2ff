#include "synovia/run_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "synovia/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "TORF snapshots are little-endian; big-endian hosts need byte swaps");

namespace synovia {

namespace {

constexpr char kMagic[4] = {'T', 'O', 'R', 'F'};
constexpr std::uint32_t kVersion = 1;

struct TorfHeader {
    char magic[4];
    std::uint32_t version;
    std::uint32_t dim;
    std::uint32_t n;
    std::uint32_t rank;
    char reserved[12];
};
static_assert(sizeof(TorfHeader) == 32);

TorfHeader read_header(std::ifstream& in, const std::string& path) {
    TorfHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::memcmp(h.magic, kMagic, 4) != 0)
        throw IoError("not a TORF snapshot: " + path);
    if (h.version != kVersion)
        throw IoError("unsupported TORF version in " + path);
    return h;
}

template <typename F>
F read_torf_impl(const std::string& path, FieldKind expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    const TorfHeader h = read_header(in, path);
    if (static_cast<FieldKind>(h.rank) != expected)
        throw IoError("TORF rank mismatch in " + path);
    const GridSpec grid = make_grid(static_cast<int>(h.dim), static_cast<int>(h.n),
                                    std::max(1, static_cast<int>(h.n) / 3));
    F f(grid);
    auto& vals = f.mutable_values();
    in.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!in) throw IoError("truncated TORF payload in " + path);
    return f;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_torf(const std::string& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    TorfHeader h{};
    std::memcpy(h.magic, kMagic, 4);
    h.version = kVersion;
    h.dim = static_cast<std::uint32_t>(f.grid().dim);
    h.n = static_cast<std::uint32_t>(f.grid().n);
    h.rank = static_cast<std::uint32_t>(f.kind());
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.values().size() * sizeof(double)));
    if (!out) throw IoError("short write to " + path);
}

FieldKind peek_torf_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return static_cast<FieldKind>(read_header(in, path).rank);
}

ScalarField read_torf_scalar(const std::string& path) {
    return read_torf_impl<ScalarField>(path, FieldKind::Scalar);
}
VectorField read_torf_vector(const std::string& path) {
    return read_torf_impl<VectorField>(path, FieldKind::Vector);
}
SymTensorField read_torf_sym_tensor(const std::string& path) {
    return read_torf_impl<SymTensorField>(path, FieldKind::SymTensor);
}

void write_energies_csv(const std::string& path, const std::vector<EnergyReport>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "t,kinetic,ip,jp,dbar_s,dtv2,gradc_q,dtc_q,zeta,modular_gradv,mass_c\n";
    for (const auto& r : rows) {
        out << fmt(r.t) << ',' << fmt(r.kinetic) << ',' << fmt(r.ip) << ',' << fmt(r.jp) << ','
            << fmt(r.dbar_s) << ',' << fmt(r.dtv2) << ',' << fmt(r.gradc_q) << ','
            << fmt(r.dtc_q) << ',' << fmt(r.zeta) << ',' << fmt(r.modular_gradv) << ','
            << fmt(r.mass_c) << '\n';
    }
}

std::vector<EnergyReport> read_energies_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty energies csv: " + path);
    std::vector<EnergyReport> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EnergyReport r;
        double* slots[] = {&r.t,      &r.kinetic, &r.ip,   &r.jp,           &r.dbar_s, &r.dtv2,
                           &r.gradc_q, &r.dtc_q,  &r.zeta, &r.modular_gradv, &r.mass_c};
        std::stringstream ss(line);
        std::string cell;
        for (double* slot : slots) {
            if (!std::getline(ss, cell, ','))
                throw IoError("malformed energies row in " + path + ": " + line);
            *slot = std::strtod(cell.c_str(), nullptr);
        }
        rows.push_back(r);
    }
    return rows;
}

void write_balance_csv(const std::string& path, const std::vector<BalanceSample>& balance) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "t,quantity,value\n";
    for (const auto& b : balance) {
        out << fmt(b.t) << ",dissipation," << fmt(b.dissipation) << '\n';
        out << fmt(b.t) << ",modular_s_dual," << fmt(b.modular_s_dual) << '\n';
        out << fmt(b.t) << ",forcing_power," << fmt(b.forcing_power) << '\n';
        out << fmt(b.t) << ",v_inf," << fmt(b.v_inf) << '\n';
    }
}

std::vector<BalanceSample> read_balance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<BalanceSample> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tcell, qcell, vcell;
        if (!std::getline(ss, tcell, ',') || !std::getline(ss, qcell, ',') ||
            !std::getline(ss, vcell, ','))
            throw IoError("malformed balance row in " + path + ": " + line);
        const double t = std::strtod(tcell.c_str(), nullptr);
        const double v = std::strtod(vcell.c_str(), nullptr);
        if (out.empty() || out.back().t != t) {
            BalanceSample b;
            b.t = t;
            out.push_back(b);
        }
        if (qcell == "dissipation") out.back().dissipation = v;
        else if (qcell == "modular_s_dual") out.back().modular_s_dual = v;
        else if (qcell == "forcing_power") out.back().forcing_power = v;
        else if (qcell == "v_inf") out.back().v_inf = v;
        else throw IoError("unknown balance quantity '" + qcell + "' in " + path);
    }
    return out;
}

void write_contraction_csv(const std::string& path, const ContractionReport& rep) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "t,delta,weighted_diff\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        out << fmt(rep.times[i]) << ',' << fmt(rep.delta[i]) << ','
            << fmt(rep.weighted_diff[i]) << '\n';
}

void write_inequality_report(const std::string& dir, const InequalityReport& rep) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / (rep.name + ".report"));
        if (!out) throw IoError("cannot write report for " + rep.name);
        out << "name = " << rep.name << '\n';
        out << "satisfied = " << (rep.satisfied ? "true" : "false") << '\n';
        out << "empirical_constant = " << fmt(rep.empirical_constant) << '\n';
        out << "tolerance = " << fmt(rep.tolerance) << '\n';
        out << "samples = " << rep.times.size() << '\n';
        if (!rep.note.empty()) out << "note = " << rep.note << '\n';
    }
    {
        std::ofstream out(fs::path(dir) / (rep.name + ".csv"));
        out << "t,lhs,rhs\n";
        for (std::size_t i = 0; i < rep.times.size(); ++i) {
            const double rhs = i < rep.rhs_series.size() ? rep.rhs_series[i] : 0.0;
            const double lhs = i < rep.lhs_series.size() ? rep.lhs_series[i] : 0.0;
            out << fmt(rep.times[i]) << ',' << fmt(lhs) << ',' << fmt(rhs) << '\n';
        }
    }
}

std::vector<std::string> write_run_report(const std::string& dir, const RunReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;

    const std::string energies = (fs::path(dir) / "energies.csv").string();
    write_energies_csv(energies, report.rows);
    written.push_back(energies);

    const std::string balance = (fs::path(dir) / "balance.csv").string();
    write_balance_csv(balance, report.balance);
    written.push_back(balance);

    if (!report.snapshots.empty()) {
        const fs::path snapdir = fs::path(dir) / "snapshots";
        fs::create_directories(snapdir);
        int i = 0;
        for (const auto& snap : report.snapshots) {
            char stem[32];
            std::snprintf(stem, sizeof(stem), "%04d", i++);
            const std::string vpath = (snapdir / (std::string(stem) + "_v.torf")).string();
            const std::string cpath = (snapdir / (std::string(stem) + "_c.torf")).string();
            write_torf(vpath, snap.v);
            write_torf(cpath, snap.c);
            written.push_back(vpath);
            written.push_back(cpath);
        }
    }
    return written;
}

RunReport load_run_report(const std::string& dir) {
    namespace fs = std::filesystem;
    RunReport r;
    r.rows = read_energies_csv((fs::path(dir) / "energies.csv").string());
    const auto bal = fs::path(dir) / "balance.csv";
    if (fs::exists(bal)) r.balance = read_balance_csv(bal.string());
    if (!r.rows.empty()) r.end_time = r.rows.back().t;
    return r;
}

}  // namespace synovia
