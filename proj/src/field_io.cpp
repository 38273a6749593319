#include "diskflow/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace diskflow {

namespace {

constexpr char kMagic[8] = {'E', 'U', 'L', 'D', 'I', 'S', 'K', '1'};
constexpr char kGridMagic[8] = {'D', 'F', 'G', 'R', 'I', 'D', '0', '1'};

void put_u64(std::ostream& os, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    os.write(reinterpret_cast<char*>(b), 8);
}

void put_f64(std::ostream& os, double d) {
    uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}

bool get_u64(std::istream& is, uint64_t& v) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

bool get_f64(std::istream& is, double& d) {
    uint64_t v;
    if (!get_u64(is, v)) return false;
    std::memcpy(&d, &v, 8);
    return true;
}

} // namespace

void save_snapshot(const VorticityField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("snapshot: cannot open " + path + " for writing");
    os.write(kMagic, 8);
    put_u64(os, uint64_t(f.nr()));
    put_u64(os, uint64_t(f.ntheta()));
    put_f64(os, f.time());
    for (double v : f.values()) put_f64(os, v);

    const GridSpec& s = f.grid().spec();
    os.write(kGridMagic, 8);
    put_f64(os, s.radial_q);
    put_u64(os, s.theta_map == ThetaMap::Band ? 1 : 0);
    put_f64(os, s.band_h0);
    put_f64(os, s.band_growth);
    put_u64(os, s.radial_map == RadialMap::Band ? 1 : 0);
    put_f64(os, s.radial_h0);
    put_f64(os, s.radial_growth);
    if (!os) throw std::runtime_error("snapshot: write failed for " + path);
}

VorticityField load_snapshot(const std::string& path, std::optional<GridSpec> hint) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);
    uint64_t nr = 0, nt = 0;
    double time = 0.0;
    if (!get_u64(is, nr) || !get_u64(is, nt) || !get_f64(is, time))
        throw std::runtime_error("snapshot: truncated header in " + path);
    if (nr < 4 || nt < 4 || nr > (1u << 20) || nt > (1u << 20))
        throw std::runtime_error("snapshot: implausible dimensions in " + path);

    std::vector<double> vals(size_t(nr) * nt);
    for (double& v : vals)
        if (!get_f64(is, v)) throw std::runtime_error("snapshot: truncated data in " + path);

    GridSpec spec;
    char gm[8];
    if (is.read(gm, 8) && std::memcmp(gm, kGridMagic, 8) == 0) {
        uint64_t tmap = 0, rmap = 0;
        if (!get_f64(is, spec.radial_q) || !get_u64(is, tmap) ||
            !get_f64(is, spec.band_h0) || !get_f64(is, spec.band_growth) ||
            !get_u64(is, rmap) || !get_f64(is, spec.radial_h0) ||
            !get_f64(is, spec.radial_growth))
            throw std::runtime_error("snapshot: truncated grid trailer in " + path);
        spec.theta_map = tmap == 1 ? ThetaMap::Band : ThetaMap::Uniform;
        spec.radial_map = rmap == 1 ? RadialMap::Band : RadialMap::Poly;
    } else if (hint) {
        spec = *hint;
    } else {
        throw std::runtime_error("snapshot: " + path +
                                 " has no grid trailer; a grid spec is required");
    }
    spec.nr = int(nr);
    spec.ntheta = int(nt);

    VorticityField f(std::make_shared<PolarGrid>(spec), time);
    f.values() = std::move(vals);
    return f;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void export_csv(const VorticityField& f, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("export: cannot open " + path + " for writing");
    os << "r,theta,x1,x2,value\n";
    const PolarGrid& g = f.grid();
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < f.ntheta(); ++j) {
            const Point2 p = g.node_point(i, j);
            os << format_double(g.r(i)) << ',' << format_double(g.theta(j)) << ','
               << format_double(p.x1) << ',' << format_double(p.x2) << ','
               << format_double(f.at(i, j)) << '\n';
        }
    if (!os) throw std::runtime_error("export: write failed for " + path);
}

} // namespace diskflow
