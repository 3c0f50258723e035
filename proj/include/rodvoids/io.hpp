#ifndef RODVOIDS_IO_HPP
#define RODVOIDS_IO_HPP

#include <string>

#include "rodvoids/rod1d.hpp"
#include "rodvoids/rod3d.hpp"

namespace rodvoids {

inline constexpr const char* kToolkitVersion = "0.1.0";

// All floating-point output uses 17 significant digits, which round-trips
// doubles exactly.
std::string format_g17(double x);

std::string serialize_limit_config(const LimitConfig& cfg);
LimitConfig parse_limit_config(const std::string& text);

struct VoidSetFile {
    double L = 1.0;
    double h = 0.1;
    VoidSet voids;
};

std::string serialize_voidset(const VoidSetFile& file);
VoidSetFile parse_voidset(const std::string& text);

std::string serialize_deformation(const Deformation3& def);
Deformation3 parse_deformation(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// FNV-1a, used to stamp output files with the configuration hash.
std::uint64_t fnv1a_hash(const std::string& data);

} // namespace rodvoids

#endif
