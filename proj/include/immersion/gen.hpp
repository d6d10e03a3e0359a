#pragma once

// Instance generators. All randomness is seeded; identical parameters and
// seed give byte-identical graphs.

#include <cstdint>
#include <vector>

#include "immersion/multigraph.hpp"

namespace immersion {

MultiGraph gen_complete(int n);
MultiGraph gen_complete_multipartite(const std::vector<int>& parts);
MultiGraph gen_ktt(int t);
// K_12 minus the edges of four disjoint triangles (9-regular on 12 vertices).
MultiGraph gen_seymour12();
// Circulant base graph randomized by double-edge swaps; stays d-regular.
MultiGraph gen_random_regular(int n, int d, std::uint64_t seed);
// Two random regular blocks joined by `cut` cross edges (a planted thin cut).
MultiGraph gen_two_blocks_thin_cut(int n, int d, int cut, std::uint64_t seed);

}  // namespace immersion
