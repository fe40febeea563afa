#pragma once

namespace noncyclic {

// Every data-parallel kernel takes an Exec tag. The serial path is the
// reference implementation; tests check the parallel path against it.
enum class Exec { serial, parallel };

} // namespace noncyclic
