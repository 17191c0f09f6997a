//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMCENSOR_FGLIB_HPP_
#define CHEMCENSOR_FGLIB_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chemcensor/smarts.hpp"

namespace chemcensor {

// Fixed-width bitset over a functional-group library.
class FGSignature {
public:
  FGSignature() = default;
  explicit FGSignature(int width)
      : width_(width),
        bits_(static_cast<size_t>((width + 63) / 64), 0) { }

  int width() const { return width_; }
  void set(int i) { bits_[static_cast<size_t>(i) / 64] |= word(i); }
  bool test(int i) const {
    return (bits_[static_cast<size_t>(i) / 64] & word(i)) != 0;
  }
  int count() const;
  std::vector<int> set_bits() const;

  FGSignature &operator|=(const FGSignature &other);
  bool is_subset_of(const FGSignature &other) const;
  bool operator==(const FGSignature &other) const = default;

  // Bits that are set here but clear in `other`.
  std::vector<int> difference(const FGSignature &other) const;

  std::string to_hex() const;
  static FGSignature from_hex(std::string_view hex, int width);

private:
  static std::uint64_t word(int i) { return std::uint64_t{1} << (i % 64); }
  int width_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct FGDefinition {
  int fg_id = -1;
  std::string name;
  std::string smarts;
  QueryPattern pattern;
  PatternScreen screen;
};

// Ordered functional-group library with a content digest used to tie a
// knowledge base to the exact library it was built with.
class FGLibrary {
public:
  static FGLibrary from_definitions(
      const std::vector<std::pair<std::string, std::string>> &name_smarts);
  // TSV file, one record per line: fg_id <TAB> name <TAB> SMARTS.
  // Ids must be dense 0..n-1 and in order. '#'-prefixed lines are comments.
  static FGLibrary load_file(const std::string &path);

  int size() const { return static_cast<int>(defs_.size()); }
  const FGDefinition &def(int fg_id) const {
    return defs_[static_cast<size_t>(fg_id)];
  }
  const std::vector<FGDefinition> &definitions() const { return defs_; }
  const std::string &digest() const { return digest_; }

  FGSignature empty_signature() const { return FGSignature(size()); }

  // All matches per library entry for one molecule, with the element screen
  // applied. matches[fg_id] holds atom-index mappings.
  std::vector<std::vector<std::vector<int>>> match_all(
      const Molecule &mol) const;

private:
  void compute_digest();
  std::vector<FGDefinition> defs_;
  std::string digest_;
};

}  // namespace chemcensor

#endif  // CHEMCENSOR_FGLIB_HPP_
