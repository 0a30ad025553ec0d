#pragma once

#include <string_view>

namespace ipvem {

/// Which implementation of a data-parallel kernel to run. `serial` is the
/// reference every OpenMP kernel is tested against.
enum class Exec { serial, parallel };

Exec parse_exec(std::string_view name);
int max_threads();

}  // namespace ipvem
