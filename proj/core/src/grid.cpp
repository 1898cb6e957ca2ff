#include "synovia/grid.hpp"

#include <string>

#include "synovia/errors.hpp"

namespace synovia {

GridSpec make_grid(int dim, int n, int K) {
    if (dim != 2 && dim != 3)
        throw InvalidGrid("dim must be 2 or 3, got " + std::to_string(dim));
    if (n < 8 || (n & (n - 1)) != 0)
        throw InvalidGrid("n must be a power of two >= 8, got " + std::to_string(n));
    if (K < 1 || K > n / 3)
        throw InvalidGrid("cutoff K must satisfy 1 <= K <= n/3 = " + std::to_string(n / 3) +
                          ", got " + std::to_string(K));
    return GridSpec{dim, n, K};
}

}  // namespace synovia
