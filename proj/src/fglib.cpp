//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/fglib.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "chemcensor/errors.hpp"

namespace chemcensor {

int FGSignature::count() const {
  int c = 0;
  for (std::uint64_t w : bits_)
    c += __builtin_popcountll(w);
  return c;
}

std::vector<int> FGSignature::set_bits() const {
  std::vector<int> out;
  for (int i = 0; i < width_; ++i)
    if (test(i))
      out.push_back(i);
  return out;
}

FGSignature &FGSignature::operator|=(const FGSignature &other) {
  if (width_ != other.width_)
    throw MetadataMismatchError("signature widths differ: " +
                                std::to_string(width_) + " vs " +
                                std::to_string(other.width_));
  for (size_t i = 0; i < bits_.size(); ++i)
    bits_[i] |= other.bits_[i];
  return *this;
}

bool FGSignature::is_subset_of(const FGSignature &other) const {
  if (width_ != other.width_)
    throw MetadataMismatchError("signature widths differ");
  for (size_t i = 0; i < bits_.size(); ++i)
    if ((bits_[i] & ~other.bits_[i]) != 0)
      return false;
  return true;
}

std::vector<int> FGSignature::difference(const FGSignature &other) const {
  std::vector<int> out;
  for (int i = 0; i < width_; ++i)
    if (test(i) && !other.test(i))
      out.push_back(i);
  return out;
}

std::string FGSignature::to_hex() const {
  static const char *digits = "0123456789abcdef";
  std::string out;
  int nibbles = (width_ + 3) / 4;
  for (int i = nibbles - 1; i >= 0; --i) {
    int value = 0;
    for (int b = 0; b < 4; ++b) {
      int bit = i * 4 + b;
      if (bit < width_ && test(bit))
        value |= 1 << b;
    }
    out += digits[value];
  }
  return out;
}

FGSignature FGSignature::from_hex(std::string_view hex, int width) {
  FGSignature sig(width);
  int nibbles = (width + 3) / 4;
  if (static_cast<int>(hex.size()) != nibbles)
    throw FormatError("signature hex length " + std::to_string(hex.size()) +
                      " does not fit width " + std::to_string(width));
  for (int i = 0; i < nibbles; ++i) {
    char c = hex[static_cast<size_t>(nibbles - 1 - i)];
    int value;
    if (c >= '0' && c <= '9')
      value = c - '0';
    else if (c >= 'a' && c <= 'f')
      value = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      value = c - 'A' + 10;
    else
      throw FormatError("bad hex digit in signature");
    for (int b = 0; b < 4; ++b) {
      int bit = i * 4 + b;
      if ((value & (1 << b)) != 0) {
        if (bit >= width)
          throw FormatError("signature bit beyond declared width");
        sig.set(bit);
      }
    }
  }
  return sig;
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void FGLibrary::compute_digest() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const FGDefinition &d : defs_) {
    h = fnv1a(h, std::to_string(d.fg_id));
    h = fnv1a(h, "\t");
    h = fnv1a(h, d.name);
    h = fnv1a(h, "\t");
    h = fnv1a(h, d.smarts);
    h = fnv1a(h, "\n");
  }
  std::ostringstream os;
  os << std::hex << h;
  digest_ = os.str();
}

FGLibrary FGLibrary::from_definitions(
    const std::vector<std::pair<std::string, std::string>> &name_smarts) {
  FGLibrary lib;
  lib.defs_.reserve(name_smarts.size());
  for (size_t i = 0; i < name_smarts.size(); ++i) {
    FGDefinition def;
    def.fg_id = static_cast<int>(i);
    def.name = name_smarts[i].first;
    def.smarts = name_smarts[i].second;
    def.pattern = parse_smarts(def.smarts);
    def.screen = compute_screen(def.pattern);
    lib.defs_.push_back(std::move(def));
  }
  lib.compute_digest();
  return lib;
}

FGLibrary FGLibrary::load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open FG library file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  int expected_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream ls(line);
    std::string id_str, name, smarts;
    if (!std::getline(ls, id_str, '\t') || !std::getline(ls, name, '\t') ||
        !std::getline(ls, smarts, '\t'))
      throw FormatError("FG library line " + std::to_string(line_no) +
                        ": expected 'id<TAB>name<TAB>smarts'");
    int id;
    try {
      id = std::stoi(id_str);
    } catch (const std::exception &) {
      throw FormatError("FG library line " + std::to_string(line_no) +
                        ": bad id '" + id_str + "'");
    }
    if (id != expected_id)
      throw FormatError("FG library line " + std::to_string(line_no) +
                        ": ids must be dense and ordered, expected " +
                        std::to_string(expected_id));
    ++expected_id;
    entries.emplace_back(name, smarts);
  }
  if (entries.empty())
    throw FormatError("FG library file '" + path + "' has no entries");
  return from_definitions(entries);
}

std::vector<std::vector<std::vector<int>>> FGLibrary::match_all(
    const Molecule &mol) const {
  std::vector<std::vector<std::vector<int>>> out(defs_.size());
  MoleculeProfile prof = profile_molecule(mol);
  for (size_t i = 0; i < defs_.size(); ++i) {
    if (!screen_passes(defs_[i].screen, prof))
      continue;
    out[i] = match_pattern(defs_[i].pattern, mol);
  }
  return out;
}

}  // namespace chemcensor
