/**
 * @file moduli_table.hpp
 * @brief Fixed public table of field-defining irreducible moduli.
 *
 * For every odd prime power p^e <= 2000 with e >= 2 this table records the
 * canonical monic irreducible polynomial of degree e over F_p used to realize
 * F_{p^e}: the one whose coefficient vector (c_0, ..., c_{e-1}), read as the
 * base-p integer sum c_i p^i, is smallest.  Shipping the table (rather than
 * searching at runtime) pins the element enumeration order byte-for-byte; a
 * test re-derives every entry from the canonical rule.
 *
 * Entry layout: p, e, then the e+1 coefficients c_0..c_e of the monic modulus.
 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace qmds::detail {

struct ModulusEntry {
  int p;
  int e;
  std::array<int, 7> c;  // c_0..c_e (monic, c_e = 1); unused tail is zero
};

inline constexpr std::array<ModulusEntry, 21> kModuli = {{
    {3, 2, {1, 0, 1, 0, 0, 0, 0}},
    {3, 3, {1, 2, 0, 1, 0, 0, 0}},
    {3, 4, {2, 1, 0, 0, 1, 0, 0}},
    {3, 5, {1, 2, 0, 0, 0, 1, 0}},
    {3, 6, {2, 1, 0, 0, 0, 0, 1}},
    {5, 2, {2, 0, 1, 0, 0, 0, 0}},
    {5, 3, {1, 1, 0, 1, 0, 0, 0}},
    {5, 4, {2, 0, 0, 0, 1, 0, 0}},
    {7, 2, {1, 0, 1, 0, 0, 0, 0}},
    {7, 3, {2, 0, 0, 1, 0, 0, 0}},
    {11, 2, {1, 0, 1, 0, 0, 0, 0}},
    {11, 3, {4, 1, 0, 1, 0, 0, 0}},
    {13, 2, {2, 0, 1, 0, 0, 0, 0}},
    {17, 2, {3, 0, 1, 0, 0, 0, 0}},
    {19, 2, {1, 0, 1, 0, 0, 0, 0}},
    {23, 2, {1, 0, 1, 0, 0, 0, 0}},
    {29, 2, {2, 0, 1, 0, 0, 0, 0}},
    {31, 2, {1, 0, 1, 0, 0, 0, 0}},
    {37, 2, {2, 0, 1, 0, 0, 0, 0}},
    {41, 2, {3, 0, 1, 0, 0, 0, 0}},
    {43, 2, {1, 0, 1, 0, 0, 0, 0}},
}};

}  // namespace qmds::detail
