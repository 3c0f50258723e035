#include "rodvoids/isoperimetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include "rodvoids/errors.hpp"
#include "rodvoids/so3.hpp"

namespace rodvoids {

VoxelSet VoxelSet::make(int d, int nx, int ny, int nz, double cell) {
    if (d < 1 || d > 3)
        throw InvalidInputError("E_BAD_DIMS", "voxel sets support d in {1,2,3}");
    if (d == 1 && (ny != 1 || nz != 1))
        throw InvalidInputError("E_BAD_DIMS", "d = 1 needs ny = nz = 1");
    if (d == 2 && nz != 1)
        throw InvalidInputError("E_BAD_DIMS", "d = 2 needs nz = 1");
    if (d == 3 && ny != nz)
        throw InvalidInputError("E_BAD_DIMS", "d = 3 needs a square cross-section");
    if (nx < 1 || ny < 1 || nz < 1 || cell <= 0.0)
        throw InvalidInputError("E_BAD_DIMS", "grid dims must be positive");
    VoxelSet v;
    v.d = d;
    v.nx = nx;
    v.ny = ny;
    v.nz = nz;
    v.cell = cell;
    v.cells.assign(static_cast<size_t>(nx) * ny * nz, 0);
    return v;
}

int VoxelSet::occupied() const {
    int n = 0;
    for (auto c : cells) n += c != 0;
    return n;
}

double VoxelSet::volume() const { return occupied() * std::pow(cell, d); }

double VoxelSet::domain_volume() const { return cell_count() * std::pow(cell, d); }

double VoxelSet::relative_perimeter() const {
    int faces = 0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nz; ++k) {
                const bool a = at(i, j, k);
                if (i + 1 < nx && a != at(i + 1, j, k)) ++faces;
                if (j + 1 < ny && a != at(i, j + 1, k)) ++faces;
                if (k + 1 < nz && a != at(i, j, k + 1)) ++faces;
            }
    return faces * std::pow(cell, d - 1);
}

IsoperimetricCheck check_relative_isoperimetric(const VoxelSet& P, double sigma, double l) {
    if (std::abs(sigma - P.sigma()) > 1e-12 * std::max(1.0, P.sigma()) ||
        std::abs(l - P.half_length()) > 1e-12 * std::max(1.0, P.half_length()))
        throw InvalidInputError("E_BAD_DIMS",
                                "sigma and l must match the voxel grid geometry");
    if (l / sigma < 1.0)
        throw InvalidInputError("E_BAD_DIMS", "the cuboid must be long: l/sigma >= 1");
    IsoperimetricCheck out;
    const double vol = P.volume();
    out.lhs = std::min(vol, P.domain_volume() - vol);
    out.rhs_per = P.relative_perimeter();
    out.satisfies_precondition = out.rhs_per < std::pow(sigma, P.d - 1);
    out.ratio = out.rhs_per > 0.0 ? out.lhs / (sigma * out.rhs_per) : 0.0;
    return out;
}

ExhaustiveScanResult exhaustive_scan_2d(int n_long, int n_cross, double cell,
                                        double reference_c) {
    const int bits = n_long * n_cross;
    if (bits > 24)
        throw InvalidInputError("E_TOO_LARGE",
                                "exhaustive enumeration is capped at 2^24 subsets");
    const double sigma = n_cross * cell;
    const double per_unit = cell;       // face measure, d = 2
    const double vol_unit = cell * cell;
    const double threshold = sigma;     // sigma^{d-1}
    const std::uint32_t full = bits == 32 ? ~0u : ((1u << bits) - 1u);

    // bit layout: cell (i, j) -> bit i * n_cross + j
    std::uint32_t cross_valid = 0, long_valid = 0;
    for (int i = 0; i < n_long; ++i)
        for (int j = 0; j < n_cross; ++j) {
            if (j + 1 < n_cross) cross_valid |= 1u << (i * n_cross + j);
            if (i + 1 < n_long) long_valid |= 1u << (i * n_cross + j);
        }

    ExhaustiveScanResult res;
    res.total = static_cast<std::uint64_t>(full) + 1;
    for (std::uint32_t mask = 0;; ++mask) {
        const int vol_cells = std::popcount(mask);
        const int faces = std::popcount((mask ^ (mask >> 1)) & cross_valid) +
                          std::popcount((mask ^ (mask >> n_cross)) & long_valid);
        if (faces > 0) {
            const double per = faces * per_unit;
            const double lhs = std::min(vol_cells, bits - vol_cells) * vol_unit;
            const double ratio = lhs / (sigma * per);
            res.max_ratio_overall = std::max(res.max_ratio_overall, ratio);
            if (per < threshold) {
                ++res.eligible;
                res.c_hat_strict = std::max(res.c_hat_strict, ratio);
                if (reference_c >= 0.0 && ratio > reference_c) ++res.violations;
            }
        }
        if (mask == full) break;
    }
    return res;
}

bool exhaustive_check_1d(int n) {
    if (n > 24)
        throw InvalidInputError("E_TOO_LARGE",
                                "exhaustive enumeration is capped at 2^24 subsets");
    const std::uint32_t full = (1u << n) - 1u;
    for (std::uint32_t mask = 0;; ++mask) {
        int faces = 0;
        for (int i = 0; i + 1 < n; ++i)
            if (((mask >> i) & 1u) != ((mask >> (i + 1)) & 1u)) ++faces;
        if (faces < 1) {
            const int vol = std::popcount(mask);
            if (std::min(vol, n - vol) != 0) return false;
        }
        if (mask == full) break;
    }
    return true;
}

DominantComponentCheck dominant_component_check(const VoxelSet& E, double sigma, double l,
                                                int threshold_multiplier,
                                                double c_hat, double T0) {
    if (threshold_multiplier != 1 && threshold_multiplier != 2)
        throw InvalidInputError("E_BAD_INPUT", "threshold multiplier must be 1 or 2");
    DominantComponentCheck out;
    out.scale_ok = l / sigma >= T0;
    out.perimeter = E.relative_perimeter();

    const double cap = threshold_multiplier * std::pow(sigma, E.d - 1);
    const bool volume_term = threshold_multiplier == 2;
    bool pre = out.perimeter < cap;
    if (volume_term) pre = pre && E.volume() <= 0.25 * E.domain_volume();
    out.precondition_met = pre && out.scale_ok;

    // components of the complement, face connectivity
    std::vector<int> comp(E.cell_count(), -1);
    int n_comp = 0;
    std::vector<int> sizes;
    for (int i = 0; i < E.nx; ++i)
        for (int j = 0; j < E.ny; ++j)
            for (int k = 0; k < E.nz; ++k) {
                if (E.at(i, j, k) || comp[E.index(i, j, k)] >= 0) continue;
                const int id = n_comp++;
                int size = 0;
                std::queue<std::array<int, 3>> bfs;
                bfs.push({i, j, k});
                comp[E.index(i, j, k)] = id;
                while (!bfs.empty()) {
                    const auto [a, b, c] = bfs.front();
                    bfs.pop();
                    ++size;
                    static const int d6[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                                 {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
                    for (const auto& dd : d6) {
                        const int na = a + dd[0], nb = b + dd[1], nc = c + dd[2];
                        if (na < 0 || na >= E.nx || nb < 0 || nb >= E.ny || nc < 0 ||
                            nc >= E.nz)
                            continue;
                        const int idx = E.index(na, nb, nc);
                        if (E.at(na, nb, nc) || comp[idx] >= 0) continue;
                        comp[idx] = id;
                        bfs.push({na, nb, nc});
                    }
                }
                sizes.push_back(size);
            }
    out.component_count = n_comp;
    const double cell_vol = std::pow(E.cell, E.d);
    const int largest = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
    out.largest_volume = largest * cell_vol;
    out.complement_volume = E.domain_volume() - out.largest_volume;

    const double rhs_core = sigma * out.perimeter;
    out.bound = c_hat * rhs_core + (volume_term ? E.volume() : 0.0);
    const double excess = out.complement_volume - (volume_term ? E.volume() : 0.0);
    out.required_constant = rhs_core > 0.0 ? std::max(0.0, excess) / rhs_core : 0.0;
    out.holds = out.complement_volume <= out.bound + 1e-12 &&
                out.largest_volume > 0.5 * E.domain_volume();
    return out;
}

VoxelSet random_blob(int d, int nx, int ny, int nz, double cell, int target,
                     std::uint64_t& state) {
    VoxelSet v = VoxelSet::make(d, nx, ny, nz, cell);
    const int i0 = static_cast<int>(uniform01(state) * nx) % nx;
    const int j0 = static_cast<int>(uniform01(state) * ny) % ny;
    const int k0 = static_cast<int>(uniform01(state) * nz) % nz;
    std::vector<std::array<int, 3>> frontier{{i0, j0, k0}};
    v.set(i0, j0, k0, true);
    int placed = 1;
    while (placed < target && !frontier.empty()) {
        const size_t pick = static_cast<size_t>(uniform01(state) * frontier.size()) %
                            frontier.size();
        const auto [a, b, c] = frontier[pick];
        static const int d6[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                     {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
        std::vector<std::array<int, 3>> open;
        for (const auto& dd : d6) {
            const int na = a + dd[0], nb = b + dd[1], nc = c + dd[2];
            if (na < 0 || na >= nx || nb < 0 || nb >= ny || nc < 0 || nc >= nz) continue;
            if (!v.at(na, nb, nc)) open.push_back({na, nb, nc});
        }
        if (open.empty()) {
            frontier.erase(frontier.begin() + pick);
            continue;
        }
        const auto cellpos = open[static_cast<size_t>(uniform01(state) * open.size()) %
                                  open.size()];
        v.set(cellpos[0], cellpos[1], cellpos[2], true);
        frontier.push_back(cellpos);
        ++placed;
    }
    return v;
}

} // namespace rodvoids
