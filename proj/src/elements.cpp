//
// Project ChemCensor - Copyright 2026 ChemCensor Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemcensor/elements.hpp"

#include <array>
#include <unordered_map>

namespace chemcensor {
namespace {

constexpr std::array<std::string_view, kMaxAtomicNum + 1> kSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

const std::unordered_map<std::string_view, int> &symbol_table() {
  static const std::unordered_map<std::string_view, int> table = [] {
    std::unordered_map<std::string_view, int> t;
    for (int z = 0; z <= kMaxAtomicNum; ++z)
      t.emplace(kSymbols[static_cast<size_t>(z)], z);
    return t;
  }();
  return table;
}

}  // namespace

std::string_view element_symbol(int atomic_num) {
  if (atomic_num < 0 || atomic_num > kMaxAtomicNum)
    return {};
  return kSymbols[static_cast<size_t>(atomic_num)];
}

int atomic_number(std::string_view symbol) {
  auto it = symbol_table().find(symbol);
  return it == symbol_table().end() ? -1 : it->second;
}

bool is_organic_subset(int atomic_num) {
  switch (atomic_num) {
  case 5:   // B
  case 6:   // C
  case 7:   // N
  case 8:   // O
  case 9:   // F
  case 15:  // P
  case 16:  // S
  case 17:  // Cl
  case 35:  // Br
  case 53:  // I
    return true;
  default:
    return false;
  }
}

bool can_be_aromatic(int atomic_num) {
  switch (atomic_num) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 15:
  case 16:
  case 33:  // As
  case 34:  // Se
    return true;
  default:
    return false;
  }
}

int implicit_hydrogens(int atomic_num, int bond_order_sum) {
  auto pick = [&](std::initializer_list<int> valences) {
    for (int v : valences)
      if (bond_order_sum <= v)
        return v - bond_order_sum;
    return -1;
  };
  switch (atomic_num) {
  case 5:
    return pick({3});
  case 6:
    return pick({4});
  case 7:
    return pick({3});
  case 8:
    return pick({2});
  case 15:
    return pick({3, 5});
  case 16:
    return pick({2, 4, 6});
  case 9:
  case 17:
  case 35:
  case 53:
    return pick({1});
  default:
    return 0;  // bracket-only elements never reach here
  }
}

int aromatic_implicit_hydrogens(int atomic_num, int degree) {
  int pi = 0;
  switch (atomic_num) {
  case 5:
  case 6:
  case 7:
  case 15:
    pi = 1;
    break;
  default:
    pi = 0;
    break;
  }
  int base = 0;
  switch (atomic_num) {
  case 5:
    base = 3;
    break;
  case 6:
    base = 4;
    break;
  case 7:
  case 15:
    base = 3;
    break;
  case 8:
  case 16:
    base = 2;
    break;
  default:
    base = 0;
    break;
  }
  int h = base - degree - pi;
  return h < 0 ? 0 : h;
}

}  // namespace chemcensor
