#pragma once

#include <cstddef>
#include <utility>

namespace srcartan {

/// Number of index pairs i < j in {0, ..., dim-1}.
constexpr std::size_t pair_count(std::size_t dim) { return dim * (dim - 1) / 2; }

/// Lexicographic position of the pair (i, j), i < j.
constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t dim) {
  return i * dim - i * (i + 1) / 2 + (j - i - 1);
}

constexpr std::pair<std::size_t, std::size_t> pair_at(std::size_t index, std::size_t dim) {
  std::size_t i = 0;
  while (index >= dim - 1 - i) {
    index -= dim - 1 - i;
    ++i;
  }
  return {i, i + 1 + index};
}

}  // namespace srcartan
