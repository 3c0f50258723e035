#include "rodvoids/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rodvoids/errors.hpp"

namespace rodvoids {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;
    explicit LineReader(const std::string& text) : in(text) {}

    // skips blank lines and # comments (output files carry a stamped header)
    std::string next() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.front() != '#') return line;
        }
        throw InvalidInputError("E_PARSE", "unexpected end of file");
    }
};

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

double to_double(const std::string& s) {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
        throw InvalidInputError("E_PARSE", "malformed number: " + s);
    return v;
}

int to_int(const std::string& s) {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size())
        throw InvalidInputError("E_PARSE", "malformed integer: " + s);
    return v;
}

void expect(bool cond, const std::string& what) {
    if (!cond) throw InvalidInputError("E_PARSE", what);
}

} // namespace

std::string serialize_limit_config(const LimitConfig& cfg) {
    std::ostringstream out;
    out << "rodvoids-limitconfig v1\n";
    out << "L " << format_g17(cfg.L) << " M " << format_g17(cfg.sup_bound) << "\n";
    out << "breakpoints " << cfg.breakpoints.size();
    for (double t : cfg.breakpoints) out << " " << format_g17(t);
    out << "\n";
    out << "voids " << cfg.voids.intervals.size() << "\n";
    for (const auto& iv : cfg.voids.intervals)
        out << format_g17(iv.a) << " " << format_g17(iv.b) << "\n";
    out << "segments " << cfg.segments.size() << "\n";
    for (const Segment& seg : cfg.segments) {
        out << "segment " << format_g17(seg.s0) << " " << format_g17(seg.s1) << " "
            << seg.sample_count() << "\n";
        for (int k = 0; k < seg.sample_count(); ++k) {
            out << format_g17(seg.s0 + k * seg.ds());
            const Eigen::Matrix3d& R = seg.rotations[k];
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) out << " " << format_g17(R(r, c));
            const Eigen::Vector3d& y = seg.positions[k];
            for (int c = 0; c < 3; ++c) out << " " << format_g17(y(c));
            out << "\n";
        }
    }
    return out.str();
}

LimitConfig parse_limit_config(const std::string& text) {
    LineReader rd(text);
    expect(rd.next() == "rodvoids-limitconfig v1", "bad limit-config header");
    LimitConfig cfg;
    {
        const auto t = tokens(rd.next());
        expect(t.size() == 4 && t[0] == "L" && t[2] == "M", "bad L/M line");
        cfg.L = to_double(t[1]);
        cfg.sup_bound = to_double(t[3]);
    }
    {
        const auto t = tokens(rd.next());
        expect(t.size() >= 2 && t[0] == "breakpoints", "bad breakpoints line");
        const int m = to_int(t[1]);
        expect(static_cast<int>(t.size()) == 2 + m, "breakpoint count mismatch");
        for (int i = 0; i < m; ++i) cfg.breakpoints.push_back(to_double(t[2 + i]));
    }
    {
        const auto t = tokens(rd.next());
        expect(t.size() == 2 && t[0] == "voids", "bad voids line");
        const int k = to_int(t[1]);
        for (int i = 0; i < k; ++i) {
            const auto v = tokens(rd.next());
            expect(v.size() == 2, "bad void interval line");
            cfg.voids.intervals.push_back({to_double(v[0]), to_double(v[1])});
        }
    }
    {
        const auto t = tokens(rd.next());
        expect(t.size() == 2 && t[0] == "segments", "bad segments line");
        const int n = to_int(t[1]);
        for (int i = 0; i < n; ++i) {
            const auto s = tokens(rd.next());
            expect(s.size() == 4 && s[0] == "segment", "bad segment header");
            Segment seg;
            seg.s0 = to_double(s[1]);
            seg.s1 = to_double(s[2]);
            const int count = to_int(s[3]);
            expect(count >= 2, "segment needs at least two samples");
            seg.rotations.reserve(count);
            seg.positions.reserve(count);
            for (int k = 0; k < count; ++k) {
                const auto row = tokens(rd.next());
                expect(row.size() == 13, "sample row needs s, 9 R entries, 3 y entries");
                Eigen::Matrix3d R;
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) R(r, c) = to_double(row[1 + 3 * r + c]);
                seg.rotations.push_back(R);
                seg.positions.emplace_back(to_double(row[10]), to_double(row[11]),
                                           to_double(row[12]));
            }
            cfg.segments.push_back(std::move(seg));
        }
    }
    cfg.validate();
    return cfg;
}

std::string serialize_voidset(const VoidSetFile& file) {
    std::ostringstream out;
    out << "rodvoids-voidset v1\n";
    out << "domain " << format_g17(file.L) << " " << format_g17(file.h) << "\n";
    out << "balls " << file.voids.balls.size() << "\n";
    for (const Ball& b : file.voids.balls)
        out << format_g17(b.center.x()) << " " << format_g17(b.center.y()) << " "
            << format_g17(b.center.z()) << " " << format_g17(b.r) << "\n";
    out << "slabs " << file.voids.slabs.size() << "\n";
    for (const Slab& s : file.voids.slabs)
        out << format_g17(s.lo) << " " << format_g17(s.hi) << "\n";
    out << "boxes " << file.voids.boxes.size() << "\n";
    for (const BoxPrimitive& b : file.voids.boxes)
        out << format_g17(b.lo.x()) << " " << format_g17(b.lo.y()) << " "
            << format_g17(b.lo.z()) << " " << format_g17(b.hi.x()) << " "
            << format_g17(b.hi.y()) << " " << format_g17(b.hi.z()) << "\n";
    if (file.voids.voxel_mask) {
        const VoxelMask& m = *file.voids.voxel_mask;
        out << "voxels " << m.n1 << " " << m.n2 << " " << m.n3 << "\n";
        for (int i = 0; i < m.n1; ++i)
            for (int j = 0; j < m.n2; ++j) {
                std::string row(m.n3, '0');
                for (int k = 0; k < m.n3; ++k)
                    if (m.at(i, j, k)) row[k] = '1';
                out << row << "\n";
            }
    } else {
        out << "voxels 0\n";
    }
    return out.str();
}

VoidSetFile parse_voidset(const std::string& text) {
    LineReader rd(text);
    expect(rd.next() == "rodvoids-voidset v1", "bad voidset header");
    VoidSetFile file;
    {
        const auto t = tokens(rd.next());
        expect(t.size() == 3 && t[0] == "domain", "bad domain line");
        file.L = to_double(t[1]);
        file.h = to_double(t[2]);
    }
    {
        const auto t = tokens(rd.next());
        expect(t.size() == 2 && t[0] == "balls", "bad balls line");
        for (int i = 0, n = to_int(t[1]); i < n; ++i) {
            const auto v = tokens(rd.next());
            expect(v.size() == 4, "bad ball line");
            file.voids.balls.push_back(
                {{to_double(v[0]), to_double(v[1]), to_double(v[2])}, to_double(v[3])});
        }
    }
    {
        const auto t = tokens(rd.next());
        expect(t.size() == 2 && t[0] == "slabs", "bad slabs line");
        for (int i = 0, n = to_int(t[1]); i < n; ++i) {
            const auto v = tokens(rd.next());
            expect(v.size() == 2, "bad slab line");
            file.voids.slabs.push_back({to_double(v[0]), to_double(v[1])});
        }
    }
    {
        const auto t = tokens(rd.next());
        expect(t.size() == 2 && t[0] == "boxes", "bad boxes line");
        for (int i = 0, n = to_int(t[1]); i < n; ++i) {
            const auto v = tokens(rd.next());
            expect(v.size() == 6, "bad box line");
            file.voids.boxes.push_back(
                {{to_double(v[0]), to_double(v[1]), to_double(v[2])},
                 {to_double(v[3]), to_double(v[4]), to_double(v[5])}});
        }
    }
    {
        const auto t = tokens(rd.next());
        expect(!t.empty() && t[0] == "voxels", "bad voxels line");
        if (t.size() == 4) {
            VoxelMask m;
            m.n1 = to_int(t[1]);
            m.n2 = to_int(t[2]);
            m.n3 = to_int(t[3]);
            m.inside.assign(static_cast<size_t>(m.n1) * m.n2 * m.n3, 0);
            for (int i = 0; i < m.n1; ++i)
                for (int j = 0; j < m.n2; ++j) {
                    const std::string row = rd.next();
                    expect(static_cast<int>(row.size()) == m.n3, "bad voxel row length");
                    for (int k = 0; k < m.n3; ++k)
                        m.inside[(i * m.n2 + j) * m.n3 + k] = row[k] == '1' ? 1 : 0;
                }
            file.voids.voxel_mask = std::move(m);
        } else {
            expect(t.size() == 2 && to_int(t[1]) == 0, "bad voxels line");
        }
    }
    return file;
}

std::string serialize_deformation(const Deformation3& def) {
    std::ostringstream out;
    out << "rodvoids-deformation v1\n";
    out << "domain " << format_g17(def.dom.L) << " " << format_g17(def.dom.h) << " "
        << def.dom.n1 << " " << def.dom.n2 << " " << def.dom.n3 << "\n";
    for (const Eigen::Vector3d& y : def.y)
        out << format_g17(y.x()) << " " << format_g17(y.y()) << " " << format_g17(y.z())
            << "\n";
    return out.str();
}

Deformation3 parse_deformation(const std::string& text) {
    LineReader rd(text);
    expect(rd.next() == "rodvoids-deformation v1", "bad deformation header");
    const auto t = tokens(rd.next());
    expect(t.size() == 6 && t[0] == "domain", "bad domain line");
    Deformation3 def;
    def.dom = RodDomain::make(to_double(t[1]), to_double(t[2]), to_int(t[3]), to_int(t[4]),
                              to_int(t[5]));
    def.y.resize(def.dom.node_count());
    for (auto& y : def.y) {
        const auto row = tokens(rd.next());
        expect(row.size() == 3, "bad node row");
        y = {to_double(row[0]), to_double(row[1]), to_double(row[2])};
    }
    return def;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("E_IO", "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("E_IO", "cannot write file: " + path);
    out << content;
}

std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace rodvoids
