#include "cfl/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cfl {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(0, "cannot open '" + path + "'");
    return in;
}

void expect_version(std::istream& in, const std::string& tag, int& ln) {
    std::string line;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        std::string body = line;
        if (body.rfind("# ", 0) == 0) body = body.substr(2);
        if (body == tag) return;
        throw ValidationError(ln, "expected schema version '" + tag + "', got '" + line + "'");
    }
    throw ValidationError(0, "empty file (missing schema version '" + tag + "')");
}

std::string matrix_line(const Mat3& m) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) os << (i + j ? " " : "") << format_complex(m(i, j));
    return os.str();
}

Mat3 parse_matrix_tokens(const std::vector<std::string>& toks, size_t from, int ln) {
    if (toks.size() < from + 9) throw ValidationError(ln, "matrix needs 9 complex entries");
    Mat3 m;
    for (int k = 0; k < 9; ++k) m.a[static_cast<size_t>(k)] = parse_complex(toks[from + k], ln);
    return m;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> toks;
    std::istringstream is(s);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

}  // namespace

void write_field_grid_csv(const std::string& path, const FieldGrid& g,
                          const std::string& digest_hex) {
    auto out = open_out(path);
    out << "# cflkit-fieldgrid-v1\n";
    out << "# config_digest = " << digest_hex << "\n";
    out << "# L = " << g.L << " T_end = " << g.T_end << " nx = " << g.nx << " nt = " << g.nt
        << " decay_ok = " << (g.meta.decay_ok ? 1 : 0) << " decay_max = " << g.meta.decay_max
        << "\n";
    out << "x,t,re_q,im_q,re_r,im_r,re_qx,im_qx,re_rx,im_rx\n";
    for (int it = 0; it < g.nt; ++it)
        for (int ix = 0; ix < g.nx; ++ix) {
            const size_t k = g.idx(ix, it);
            out << g.x_of(ix) << ',' << g.t_of(it) << ',' << g.q[k].real() << ',' << g.q[k].imag()
                << ',' << g.r[k].real() << ',' << g.r[k].imag() << ',' << g.qx[k].real() << ','
                << g.qx[k].imag() << ',' << g.rx[k].real() << ',' << g.rx[k].imag() << "\n";
        }
}

FieldGrid read_field_grid_csv(const std::string& path) {
    auto in = open_in(path);
    int ln = 0;
    expect_version(in, "cflkit-fieldgrid-v1", ln);
    FieldGrid g;
    std::string line;
    bool dims_seen = false;
    while (std::getline(in, line)) {
        ++ln;
        if (line.rfind("# L = ", 0) == 0) {
            const auto toks = split_ws(line);
            // "# L = <v> T_end = <v> nx = <v> nt = <v> decay_ok = <v> decay_max = <v>"
            if (toks.size() < 15) throw ValidationError(ln, "malformed grid dimension header");
            g.L = std::stod(toks[3]);
            g.T_end = std::stod(toks[6]);
            g.nx = std::stoi(toks[9]);
            g.nt = std::stoi(toks[12]);
            dims_seen = true;
            continue;
        }
        if (line.rfind('#', 0) == 0) continue;
        if (line.rfind("x,t,", 0) == 0) break;  // column header
    }
    if (!dims_seen) throw ValidationError(ln, "missing grid dimension header");
    if (g.nx < 2 || g.nt < 1) throw ValidationError(ln, "bad grid dimensions");
    const size_t total = static_cast<size_t>(g.nx) * g.nt;
    g.q.resize(total);
    g.r.resize(total);
    g.qx.resize(total);
    g.rx.resize(total);
    size_t count = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        std::istringstream is(line);
        double vals[10];
        char comma;
        for (int k = 0; k < 10; ++k) {
            if (!(is >> vals[k])) throw ValidationError(ln, "malformed data row");
            if (k < 9 && !(is >> comma)) throw ValidationError(ln, "malformed data row");
        }
        if (count >= total) throw ValidationError(ln, "more rows than nx*nt");
        g.q[count] = {vals[2], vals[3]};
        g.r[count] = {vals[4], vals[5]};
        g.qx[count] = {vals[6], vals[7]};
        g.rx[count] = {vals[8], vals[9]};
        ++count;
    }
    if (count != total) throw ValidationError(ln, "fewer rows than nx*nt");
    g.meta.provenance = "file:" + path;
    apply_decay_gate(g);
    return g;
}

void write_traces(const std::string& path, const BoundaryTraces& tr, double L, double T_end,
                  const std::string& digest_hex) {
    auto out = open_out(path);
    out << "cflkit-traces-v1\n";
    out << "config_digest = " << digest_hex << "\n";
    out << "L = " << L << "\n";
    out << "T_end = " << T_end << "\n";
    out << "nx = " << tr.q0.size() << "\n";
    out << "nt = " << tr.g0.size() << "\n";
    out << "columns x re_q0 im_q0 re_r0 im_r0\n";
    const double dx = tr.q0.size() > 1 ? L / (tr.q0.size() - 1) : 0.0;
    for (size_t i = 0; i < tr.q0.size(); ++i)
        out << dx * i << " " << tr.q0[i].real() << " " << tr.q0[i].imag() << " "
            << tr.r0[i].real() << " " << tr.r0[i].imag() << "\n";
    out << "columns t re_g0 im_g0 re_h0 im_h0 re_g1 im_g1 re_h1 im_h1\n";
    const double dt = tr.g0.size() > 1 ? T_end / (tr.g0.size() - 1) : 0.0;
    for (size_t i = 0; i < tr.g0.size(); ++i)
        out << dt * i << " " << tr.g0[i].real() << " " << tr.g0[i].imag() << " "
            << tr.h0[i].real() << " " << tr.h0[i].imag() << " " << tr.g1[i].real() << " "
            << tr.g1[i].imag() << " " << tr.h1[i].real() << " " << tr.h1[i].imag() << "\n";
}

BoundaryTraces read_traces(const std::string& path) {
    auto in = open_in(path);
    int ln = 0;
    expect_version(in, "cflkit-traces-v1", ln);
    BoundaryTraces tr;
    std::string line;
    size_t nx = 0, nt = 0;
    int block = 0;  // 1: profile rows, 2: boundary rows
    while (std::getline(in, line)) {
        ++ln;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "config_digest" || toks[0] == "L" || toks[0] == "T_end") continue;
        if (toks[0] == "nx") { nx = std::stoul(toks[2]); continue; }
        if (toks[0] == "nt") { nt = std::stoul(toks[2]); continue; }
        if (toks[0] == "columns") {
            block = (toks.size() >= 6 && toks[1] == "x") ? 1 : 2;
            continue;
        }
        if (block == 1) {
            if (toks.size() != 5) throw ValidationError(ln, "profile row needs 5 columns");
            tr.q0.push_back({std::stod(toks[1]), std::stod(toks[2])});
            tr.r0.push_back({std::stod(toks[3]), std::stod(toks[4])});
        } else if (block == 2) {
            if (toks.size() != 9) throw ValidationError(ln, "boundary row needs 9 columns");
            tr.g0.push_back({std::stod(toks[1]), std::stod(toks[2])});
            tr.h0.push_back({std::stod(toks[3]), std::stod(toks[4])});
            tr.g1.push_back({std::stod(toks[5]), std::stod(toks[6])});
            tr.h1.push_back({std::stod(toks[7]), std::stod(toks[8])});
        } else {
            throw ValidationError(ln, "data row before a columns declaration");
        }
    }
    if (tr.q0.size() != nx) throw ValidationError(ln, "profile row count does not match nx");
    if (tr.g0.size() != nt) throw ValidationError(ln, "boundary row count does not match nt");
    return tr;
}

void write_profile(const std::string& path, const Profile& p) {
    auto out = open_out(path);
    out << "cflkit-profile-v1\n";
    out << "n = " << p.x.size() << "\n";
    out << "columns x re_q0 im_q0 re_r0 im_r0\n";
    for (size_t i = 0; i < p.x.size(); ++i)
        out << p.x[i] << " " << p.q0[i].real() << " " << p.q0[i].imag() << " " << p.r0[i].real()
            << " " << p.r0[i].imag() << "\n";
    if (!p.t.empty()) {
        out << "[boundary]\n";
        out << "m = " << p.t.size() << "\n";
        out << "columns t re_g0 im_g0 re_h0 im_h0\n";
        for (size_t i = 0; i < p.t.size(); ++i)
            out << p.t[i] << " " << p.g0[i].real() << " " << p.g0[i].imag() << " "
                << p.h0[i].real() << " " << p.h0[i].imag() << "\n";
    }
}

Profile read_profile(const std::string& path) {
    auto in = open_in(path);
    int ln = 0;
    expect_version(in, "cflkit-profile-v1", ln);
    Profile p;
    std::string line;
    size_t n = 0, m = 0;
    int block = 1;
    while (std::getline(in, line)) {
        ++ln;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "n") {
            if (toks.size() != 3 || toks[1] != "=") throw ValidationError(ln, "expected n = <count>");
            n = std::stoul(toks[2]);
            continue;
        }
        if (toks[0] == "m") {
            if (toks.size() != 3 || toks[1] != "=") throw ValidationError(ln, "expected m = <count>");
            m = std::stoul(toks[2]);
            continue;
        }
        if (toks[0] == "columns") continue;
        if (toks[0] == "[boundary]") { block = 2; continue; }
        if (block == 1) {
            if (toks.size() != 5)
                throw ValidationError(ln, "profile row needs columns x re_q0 im_q0 re_r0 im_r0");
            try {
                p.x.push_back(std::stod(toks[0]));
                p.q0.push_back({std::stod(toks[1]), std::stod(toks[2])});
                p.r0.push_back({std::stod(toks[3]), std::stod(toks[4])});
            } catch (const std::exception&) {
                throw ValidationError(ln, "malformed profile row");
            }
        } else {
            if (toks.size() != 5)
                throw ValidationError(ln, "boundary row needs columns t re_g0 im_g0 re_h0 im_h0");
            try {
                p.t.push_back(std::stod(toks[0]));
                p.g0.push_back({std::stod(toks[1]), std::stod(toks[2])});
                p.h0.push_back({std::stod(toks[3]), std::stod(toks[4])});
            } catch (const std::exception&) {
                throw ValidationError(ln, "malformed boundary row");
            }
        }
    }
    if (p.x.size() != n) throw ValidationError(ln, "profile row count does not match n");
    if (block == 2 && p.t.size() != m)
        throw ValidationError(ln, "boundary row count does not match m");
    for (size_t i = 1; i < p.x.size(); ++i)
        if (p.x[i] <= p.x[i - 1]) throw ValidationError(0, "profile x values must increase");
    return p;
}

void write_scattering_records(const std::string& path,
                              const std::vector<ScatteringRecord>& recs,
                              const std::string& digest_hex) {
    auto out = open_out(path);
    out << "cflkit-scattering-v1\n";
    out << "config_digest = " << digest_hex << "\n";
    out << "count = " << recs.size() << "\n";
    for (const auto& rec : recs) {
        out << "[record]\n";
        out << "lambda = " << format_complex(rec.lambda) << "\n";
        out << "region = " << domain_name(rec.region) << "\n";
        out << "s = " << matrix_line(rec.s) << "\n";
        out << "S = " << matrix_line(rec.S) << "\n";
        for (int n = 1; n <= 4; ++n) {
            out << "Sn" << n << " = ";
            if (rec.Sn_valid[n - 1]) out << matrix_line(rec.Sn[n - 1]);
            else out << "singular";
            out << "\n";
        }
        out << "cT = " << matrix_line(rec.cT) << "\n";
        out << "flags_s =";
        for (int c = 0; c < 3; ++c) out << " " << (rec.s_flags.column_ok[c] ? 1 : 0);
        out << "\nflags_S =";
        for (int c = 0; c < 3; ++c) out << " " << (rec.S_flags.column_ok[c] ? 1 : 0);
        out << "\nflags_c =";
        for (int c = 0; c < 3; ++c) out << " " << (rec.c_flags.column_ok[c] ? 1 : 0);
        out << "\n";
    }
}

std::vector<ScatteringRecord> read_scattering_records(const std::string& path) {
    auto in = open_in(path);
    int ln = 0;
    expect_version(in, "cflkit-scattering-v1", ln);
    std::vector<ScatteringRecord> recs;
    std::string line;
    size_t count = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "config_digest") continue;
        if (toks[0] == "count") { count = std::stoul(toks[2]); continue; }
        if (toks[0] == "[record]") { recs.emplace_back(); continue; }
        if (recs.empty()) throw ValidationError(ln, "data before first [record]");
        auto& rec = recs.back();
        if (toks[0] == "lambda") {
            rec.lambda = parse_complex(toks[2], ln);
            rec.region = classify_domain(rec.lambda);
        } else if (toks[0] == "region") {
            // informational; recomputed from lambda
        } else if (toks[0] == "s") rec.s = parse_matrix_tokens(toks, 2, ln);
        else if (toks[0] == "S") rec.S = parse_matrix_tokens(toks, 2, ln);
        else if (toks[0].rfind("Sn", 0) == 0 && toks[0].size() == 3) {
            const int n = toks[0][2] - '0';
            if (n < 1 || n > 4) throw ValidationError(ln, "bad spectral matrix index");
            if (toks.size() >= 3 && toks[2] == "singular") rec.Sn_valid[n - 1] = false;
            else {
                rec.Sn[n - 1] = parse_matrix_tokens(toks, 2, ln);
                rec.Sn_valid[n - 1] = true;
            }
        } else if (toks[0] == "cT") rec.cT = parse_matrix_tokens(toks, 2, ln);
        else if (toks[0] == "flags_s" || toks[0] == "flags_S" || toks[0] == "flags_c") {
            if (toks.size() != 5) throw ValidationError(ln, "flags need 3 entries");
            AdmissibilityFlags* fl = toks[0] == "flags_s"   ? &rec.s_flags
                                     : toks[0] == "flags_S" ? &rec.S_flags
                                                            : &rec.c_flags;
            for (int c = 0; c < 3; ++c) fl->column_ok[c] = (toks[2 + c] == "1");
        } else {
            throw ValidationError(ln, "unknown record key '" + toks[0] + "'");
        }
    }
    if (recs.size() != count) throw ValidationError(ln, "record count mismatch");
    return recs;
}

void write_reconstruction_csv(const std::string& path, const ReconstructionReport& rep,
                              const std::string& digest_hex) {
    auto out = open_out(path);
    out << "# cflkit-reconstruction-v1\n";
    out << "# config_digest = " << digest_hex << "\n";
    out << "x,t,re_qx_rec,im_qx_rec,re_qx_ref,im_qx_ref,rel_err_q,rel_err_r\n";
    for (const auto& p : rep.points)
        out << p.x << ',' << p.t << ',' << p.qx_rec.real() << ',' << p.qx_rec.imag() << ','
            << p.qx_ref.real() << ',' << p.qx_ref.imag() << ',' << p.rel_err_q << ','
            << p.rel_err_r << "\n";
}

void write_reconstruction_summary(const std::string& path, const ReconstructionReport& rep,
                                  const std::string& digest_hex) {
    auto out = open_out(path);
    out << "cflkit-reconstruction-summary-v1\n";
    out << "config_digest = " << digest_hex << "\n";
    out << "points = " << rep.points.size() << "\n";
    out << "ray_arg = " << rep.ray.arg << "\n";
    out << "ray_magnitudes =";
    for (double m : rep.ray.magnitudes) out << " " << m;
    out << "\n";
    out << "validated_sign = " << rep.validated_sign << "\n";
    out << "max_rel_err_q = " << rep.max_rel_err_q << "\n";
    out << "max_rel_err_r = " << rep.max_rel_err_r << "\n";
    out << "fitted_decay_exponent = " << rep.fitted_decay_exponent << "\n";
    for (const auto& p : rep.points) {
        out << "point x = " << p.x << " t = " << p.t << " ok = " << (p.ok ? 1 : 0)
            << " rel_err_q = " << p.rel_err_q << " rel_err_r = " << p.rel_err_r;
        if (!p.note.empty()) out << " note = " << p.note;
        out << "\n";
    }
}

}  // namespace cfl
