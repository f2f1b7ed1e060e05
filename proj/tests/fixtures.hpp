#pragma once

#include "hyperiso/isogeny.hpp"

namespace fixtures {

using namespace hyperiso;

inline const FieldCtx* F1009() { return prime_field(1009); }

inline Curve golden_curve() {
  const FieldCtx* F = F1009();
  return Curve(F, product_of_linears({Fq(F, 179), Fq(F, 237), Fq(F, 325), Fq(F, 344), Fq(F, 673)}, F));
}

inline Divisor mumford(const FieldCtx* F, std::vector<int64_t> u, std::vector<int64_t> v) {
  return {poly_from_ints(F, u), poly_from_ints(F, v)};
}

inline Divisor golden_T1() { return mumford(F1009(), {513, 714, 1}, {273, 182}); }
inline Divisor golden_T2() { return mumford(F1009(), {51, 654, 1}, {545, 804}); }
inline Divisor golden_y() { return mumford(F1009(), {637, 425, 1}, {930, 498}); }
inline Divisor golden_phi_u() { return mumford(F1009(), {658, 462, 1}, {522, 365}); }
inline Divisor golden_phi_y() { return mumford(F1009(), {883, 512, 1}, {148, 827}); }

/// Random squarefree monic f of degree 2g+1 over F.
inline Curve random_curve(const FieldCtx* F, int g, Rng& rng) {
  while (true) {
    std::vector<Fq> c;
    for (int i = 0; i < 2 * g + 1; ++i) c.push_back(random_element(F, rng));
    c.push_back(Fq(F, 1));
    PolyF f(c);
    if (gcd(f, f.derivative()).degree() == 0) return Curve(F, f);
  }
}

/// 2-torsion class of the roots r_i, r_j (i, j are 1-based; 0 marks the point at infinity).
inline Divisor two_torsion(const Curve& C, std::vector<Fq> roots) {
  const FieldCtx* F = roots.empty() ? C.K : roots[0].field();
  return {product_of_linears(roots, F), PolyF()};
}

// Genus-3 (5,5,5)-isogenous pair over F_120049.
inline const FieldCtx* F120049() { return prime_field(120049); }
inline constexpr const char* g3_C = "X^7 + 118263X^5 + 44441X^3 + 81968X";
inline constexpr const char* g3_D = "X^7 + 87967X^6 + 102801X^5 + 70026X^4 + 30426X^3 + 37313X^2 + 77459X";
inline const char* const g3_T[3][2] = {
    {"X^3 + 90254X^2 + 103950X + 34646", "63966X^2 + 19029X + 62065"},
    {"X^3 + 29700X^2 + 10920X + 14179", "77142X^2 + 66846X + 84040"},
    {"X^3 + 119858X^2 + 87344X + 82114", "51063X^2 + 95007X + 64731"}};
inline const char* const g3_den8 = "u^8 + 107005u^7 + 34717u^6 + 96329u^5 + 81848u^4 + 90494u^3";
inline const char* const g3_den7 = "u^7 + 107005u^6 + 34717u^5 + 96329u^4 + 81848u^3 + 90494u^2";
inline const char* const g3_den16 =
    "u^16 + 107005u^15 + 32931u^14 + 103407u^13 + 67011u^12 + 105334u^11 + 109571u^10 + 59270u^9 + 83877u^8 + "
    "34998u^7 + 98548u^6 + 24580u^5";
inline const char* const g3_den15 =
    "u^15 + 107005u^14 + 32931u^13 + 103407u^12 + 67011u^11 + 105334u^10 + 109571u^9 + 59270u^8 + 83877u^7 + "
    "34998u^6 + 98548u^5 + 24580u^4";
inline const char* const g3_num[6] = {
    "26590u^13 + 38875u^12 + 11144u^11 + 39196u^10 + 48794u^9 + 80531u^8 + 56286u^7 + 42203u^6 + 49314u^5 + "
    "34405u^4 + 28021u^3 + 82360u^2 + 112863u + 64433",
    "13588u^13 + 99739u^12 + 60510u^11 + 3267u^10 + 56188u^9 + 27913u^8 + 79606u^7 + 79490u^6 + 39953u^5 + "
    "101739u^4 + 118959u^3 + 88791u^2 + 59459u + 44419",
    "87680u^12 + 77147u^11 + 47767u^10 + 91104u^9 + 101830u^8 + 51358u^7 + 106657u^6 + 1059u^5 + 28890u^4 + "
    "72926u^3 + 40489u^2 + 20614u + 13587",
    "12306u^20 + 37665u^19 + 84758u^18 + 83076u^17 + 51365u^16 + 42432u^15 + 76312u^14 + 63248u^13 + 97292u^12 + "
    "25304u^11 + 38304u^10 + 26932u^9 + 108075u^8 + 40558u^7 + 5431u^6 + 22057u^5 + 100345u^4 + 113409u^3 + "
    "73221u^2 + 39576u + 78248",
    "39012u^20 + 43063u^19 + 41666u^18 + 90531u^17 + 18614u^16 + 112658u^15 + 99705u^14 + 15123u^13 + 56542u^12 + "
    "44122u^11 + 40721u^10 + 103078u^9 + 29236u^8 + 114961u^7 + 99184u^6 + 32122u^5 + 94412u^4 + 42358u^3 + "
    "4616u^2 + 66587u + 86686",
    "77510u^19 + 5507u^18 + 57109u^17 + 115038u^16 + 83721u^15 + 32646u^14 + 7900u^13 + 28888u^12 + 83235u^11 + "
    "112193u^10 + 99943u^9 + 38123u^8 + 70050u^7 + 48716u^6 + 15860u^5 + 65499u^4 + 38669u^3 + 35838u^2 + "
    "82517u + 82266"};

inline IsogenyFractions g3_fractions(const FieldCtx* F) {
  IsogenyFractions fr;
  fr.genus = 3;
  const char* dens[6] = {g3_den8, g3_den8, g3_den7, g3_den16, g3_den16, g3_den15};
  for (int i = 0; i < 6; ++i) fr.parts.push_back({parse_polynomial(F, g3_num[i]), parse_polynomial(F, dens[i])});
  return fr;
}

inline Curve g3_curve_C() { return Curve(F120049(), parse_polynomial(F120049(), g3_C)); }
inline Curve g3_curve_D() { return Curve(F120049(), parse_polynomial(F120049(), g3_D)); }
inline std::vector<Divisor> g3_kernel() {
  std::vector<Divisor> T;
  for (const auto& t : g3_T) T.push_back({parse_polynomial(F120049(), t[0]), parse_polynomial(F120049(), t[1])});
  return T;
}

}  // namespace fixtures
