#ifndef RODVOIDS_ISOPERIMETRY_HPP
#define RODVOIDS_ISOPERIMETRY_HPP

#include <cstdint>
#include <vector>

namespace rodvoids {

// Voxel subset of a long cuboid grid: nx cells along the axis, ny (= nz in
// d = 3) across. The cuboid has cross side sigma = ny * cell and length
// 2l = nx * cell.
struct VoxelSet {
    int d = 3;
    int nx = 1, ny = 1, nz = 1;
    double cell = 1.0;
    std::vector<std::uint8_t> cells;

    static VoxelSet make(int d, int nx, int ny, int nz, double cell);

    int cell_count() const { return nx * ny * nz; }
    int index(int i, int j, int k) const { return (i * ny + j) * nz + k; }
    bool at(int i, int j, int k) const { return cells[index(i, j, k)] != 0; }
    void set(int i, int j, int k, bool v) { cells[index(i, j, k)] = v ? 1 : 0; }

    double sigma() const { return ny * cell; }
    double half_length() const { return 0.5 * nx * cell; }
    int occupied() const;
    double volume() const;        // occupied * cell^d
    double domain_volume() const; // 2 l sigma^{d-1}
    // Interior faces between the set and its complement, times cell^{d-1}.
    double relative_perimeter() const;
};

struct IsoperimetricCheck {
    double lhs = 0.0;     // min(vol(P), vol(S \ P))
    double rhs_per = 0.0; // relative perimeter
    bool satisfies_precondition = false; // rhs_per < sigma^{d-1}
    double ratio = 0.0;   // lhs / (sigma * rhs_per), 0 when rhs_per = 0
};

IsoperimetricCheck check_relative_isoperimetric(const VoxelSet& P, double sigma, double l);

struct ExhaustiveScanResult {
    std::uint64_t total = 0;
    std::uint64_t eligible = 0;       // strict precondition satisfied, per > 0
    double c_hat_strict = 0.0;        // max ratio over eligible subsets
    std::uint64_t violations = 0;     // eligible subsets with ratio > reference (if >= 0)
    double max_ratio_overall = 0.0;   // over all subsets with per > 0 (diagnostic)
};

// Enumerates every subset of an (n_long x n_cross) strip, d = 2. Grids up
// to 24 cells are enumerated exhaustively (determinism cap); larger inputs
// are rejected. `reference_c` < 0 disables violation counting.
ExhaustiveScanResult exhaustive_scan_2d(int n_long, int n_cross, double cell,
                                        double reference_c = -1.0);

// d = 1 triviality: every subset of an n-cell strip with relative perimeter
// < 1 (no interior faces) has min-volume zero. Returns false if any
// counterexample exists.
bool exhaustive_check_1d(int n);

struct DominantComponentCheck {
    bool scale_ok = false;        // l / sigma >= T0
    bool precondition_met = false;
    int component_count = 0;
    double largest_volume = 0.0;     // vol(P1)
    double complement_volume = 0.0;  // vol(S \ P1)
    double perimeter = 0.0;          // union of component boundaries = per(E)
    double bound = 0.0;              // C sigma per (+ vol E with the volume term)
    bool holds = false;
    double required_constant = 0.0;  // smallest C making the bound hold
};

// Dominant-component bounds on the complement of the void set E: the
// threshold multiplier selects the perimeter cap (1 or 2 times
// sigma^{d-1}); the 2x variant adds the volume cap vol(E) <= vol(S)/4 and
// the vol(E) term on the right-hand side.
DominantComponentCheck dominant_component_check(const VoxelSet& E, double sigma, double l,
                                                int threshold_multiplier,
                                                double c_hat, double T0);

// Seeded random connected blob with `target` cells (random BFS growth);
// used by the randomized suite.
VoxelSet random_blob(int d, int nx, int ny, int nz, double cell, int target,
                     std::uint64_t& state);

} // namespace rodvoids

#endif
