#include "lagrangeflow/ensemble_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "lagrangeflow/errors.hpp"
#include "lagrangeflow/reduce.hpp"

namespace lagrangeflow {

namespace {

constexpr std::array<char, 4> kMagic{'L', 'G', 'F', '1'};

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), 8);
    if (!in) throw std::runtime_error("truncated LGF1 header");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
}

void put_f64(std::ostream& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

void write_header(std::ostream& out, std::uint64_t n, std::uint64_t m, std::uint64_t tag, std::uint64_t seed) {
    out.write(kMagic.data(), 4);
    put_u64(out, n);
    put_u64(out, m);
    put_u64(out, tag);
    put_u64(out, seed);
}

}  // namespace

std::uint64_t measure_tag_code(const MeasureTag& tag) {
    if (tag.kind == MeasureTag::Kind::wiener) return 0;
    const std::uint64_t h = fnv1a64(tag.case_name);
    return h == 0 ? 1 : h;
}

void write_ensemble(std::ostream& out, const PathEnsemble& ens) {
    write_header(out, ens.paths(), ens.grid().steps(), measure_tag_code(ens.tag()), ens.seed());
    for (const Vec3& x : ens.positions())
        for (std::size_t d = 0; d < 3; ++d) put_f64(out, x[d]);
    for (const Vec3& x : ens.noise())
        for (std::size_t d = 0; d < 3; ++d) put_f64(out, x[d]);
}

void write_ensemble(const std::string& path, const PathEnsemble& ens) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_ensemble(out, ens);
}

PathEnsemble read_ensemble(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || magic != kMagic) throw std::runtime_error("not an LGF1 file");
    const std::uint64_t n = get_u64(in);
    const std::uint64_t m = get_u64(in);
    const std::uint64_t tag_code = get_u64(in);
    const std::uint64_t seed = get_u64(in);
    if (n == 0 || m == 0) throw std::runtime_error("LGF1 header has empty dimensions");

    MeasureTag tag = MeasureTag::wiener();
    if (tag_code != 0) {
        bool found = false;
        for (const auto& name : catalog_names()) {
            if (measure_tag_code(MeasureTag::pu(name)) == tag_code) {
                tag = MeasureTag::pu(name);
                found = true;
            }
        }
        if (!found) throw UnknownName("LGF1 tag does not match any cataloged case");
    }

    check_capacity(n * (2 * m + 1), sizeof(Vec3));
    std::vector<Vec3> pos(n * (m + 1));
    std::vector<Vec3> noise(n * m);
    for (auto& x : pos)
        for (std::size_t d = 0; d < 3; ++d) x[d] = get_f64(in);
    for (auto& x : noise)
        for (std::size_t d = 0; d < 3; ++d) x[d] = get_f64(in);
    return PathEnsemble(TimeGrid(m), n, std::move(tag), seed, std::move(pos), std::move(noise));
}

PathEnsemble read_ensemble(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_ensemble(in);
}

void write_process(std::ostream& out, const ProcessSample& p, const MeasureTag& tag, std::uint64_t seed) {
    write_header(out, p.paths(), p.grid().steps(), measure_tag_code(tag), seed);
    for (double v : p.values()) put_f64(out, v);
}

void write_process_csv(std::ostream& out, const ProcessSample& p, bool per_path) {
    out << std::setprecision(17);
    out << "t";
    if (per_path) {
        for (std::size_t n = 0; n < p.paths(); ++n)
            for (std::size_t d = 0; d < p.dim(); ++d) out << ",path" << n << "_" << d;
    } else {
        for (std::size_t d = 0; d < p.dim(); ++d) out << ",mean_" << d;
    }
    out << "\n";
    std::vector<double> column(p.paths());
    for (std::size_t k = 0; k < p.grid().points(); ++k) {
        out << p.grid().t(k);
        if (per_path) {
            for (std::size_t n = 0; n < p.paths(); ++n)
                for (std::size_t d = 0; d < p.dim(); ++d) out << "," << p(n, k, d);
        } else {
            for (std::size_t d = 0; d < p.dim(); ++d) {
                for (std::size_t n = 0; n < p.paths(); ++n) column[n] = p(n, k, d);
                out << "," << tree_sum_serial(column) / static_cast<double>(p.paths());
            }
        }
        out << "\n";
    }
}

}  // namespace lagrangeflow
