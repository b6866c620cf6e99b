#include "mpfd/field.hpp"

#include <cstring>

namespace mpfd {

// Wrap one dimension at a time; later passes copy rows that already include
// the earlier passes' halos, so edges and corners compose correctly.
void fill_halos_periodic(Field& f) {
    const GridSpec& g = f.grid();
    const int n = g.n;
    const int H = GridSpec::halo_depth;
    const int e = g.ext();
    double* d = f.raw();
    const auto ext = static_cast<std::size_t>(e);

    // x direction: contiguous rows, wrap the ends of each row.
    for (int kk = 0; kk < e; ++kk) {
        for (int jj = 0; jj < e; ++jj) {
            double* row = d + (static_cast<std::size_t>(kk) * ext + jj) * ext;
            for (int h = 0; h < H; ++h) {
                row[h] = row[h + n];              // i = -H+h  <-  n-H+h
                row[H + n + h] = row[H + h];      // i = n+h   <-  h
            }
        }
    }
    // y direction: copy whole x-rows.
    const std::size_t row_bytes = ext * sizeof(double);
    for (int kk = 0; kk < e; ++kk) {
        double* plane = d + static_cast<std::size_t>(kk) * ext * ext;
        for (int h = 0; h < H; ++h) {
            std::memcpy(plane + static_cast<std::size_t>(h) * ext,
                        plane + static_cast<std::size_t>(h + n) * ext, row_bytes);
            std::memcpy(plane + static_cast<std::size_t>(H + n + h) * ext,
                        plane + static_cast<std::size_t>(H + h) * ext, row_bytes);
        }
    }
    // z direction: copy whole xy-planes.
    const std::size_t plane_doubles = ext * ext;
    const std::size_t plane_bytes = plane_doubles * sizeof(double);
    for (int h = 0; h < H; ++h) {
        std::memcpy(d + static_cast<std::size_t>(h) * plane_doubles,
                    d + static_cast<std::size_t>(h + n) * plane_doubles, plane_bytes);
        std::memcpy(d + static_cast<std::size_t>(H + n + h) * plane_doubles,
                    d + static_cast<std::size_t>(H + h) * plane_doubles, plane_bytes);
    }
    f.note_halos_filled();
}

}  // namespace mpfd
