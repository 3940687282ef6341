//! Worked scenarios shipped with the tool.

pub const GALLERY: &[(&str, &str)] = &[
    ("Z-at-2", Z_AT_2),
    ("koszul-duality", KOSZUL_DUALITY),
    ("regular-sequence", REGULAR_SEQUENCE),
    ("six-conditions", SIX_CONDITIONS),
    ("gm-comparison", GM_COMPARISON),
    ("spectral-edge", SPECTRAL_EDGE),
    ("basechange-pos", BASECHANGE_POS),
    ("basechange-gap", BASECHANGE_GAP),
    ("radical-invariance", RADICAL_INVARIANCE),
    ("wpr", WPR),
    ("finite-oracle", FINITE_ORACLE),
];

pub fn get(name: &str) -> Option<&'static str> {
    GALLERY.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    GALLERY.iter().map(|(n, _)| *n)
}

const Z_AT_2: &str = "\
# the integers, Z/8 and Z/3 at the prime 2
ring Z = ZZ
ideal I = (2)
module Z8 = coker([[8]])
module Z3 = coker([[3]])
task adic_tower Z I
task completeness Z I
task completeness Z8 I
task completeness Z3 I
task gm_comparison Z8 I
";

const KOSZUL_DUALITY: &str = "\
# Hom(K(x), R) against the shifted Koszul complex
ring Z = ZZ
ideal two = (2)
ring Qx = poly(QQ, [x])
ideal x1 = (x)
ring Qxy = poly(QQ, [x, y])
ideal xy = (x, y)
task koszul_duality two
task koszul_duality x1
task koszul_duality xy
";

const REGULAR_SEQUENCE: &str = "\
# Koszul homology of a regular sequence sits in the top degree
ring R = poly(QQ, [x, y])
ideal I = (x, y)
task koszul_homology I
";

const SIX_CONDITIONS: &str = "\
# the six vanishing conditions agree on every input
ring R = poly(QQ, [x, y])
ideal m = (x, y)
module unit = coker([[x - 1]])
module point = quotient(m)
module nothing = zero
ring Z = ZZ
ideal two = (2)
module Z3 = coker([[3]])
module Z4 = coker([[4]])
module Z8 = coker([[8]])
complex twice = chain(-1, [Z4, Z4], [[[2]]])
task six_conditions unit m depth=6
task six_conditions point m depth=6
task six_conditions Z3 two depth=6
task six_conditions Z two depth=6
task six_conditions nothing m depth=6
task six_conditions twice two depth=6
task six_conditions Z8 two depth=6
";

const GM_COMPARISON: &str = "\
# H_0 of the derived completion tower against the adic tower
ring Z = ZZ
ideal two = (2)
module Z3 = coker([[3]])
module Z8 = coker([[8]])
module mixed = Z ++ Z3
ring R = poly(QQ, [x, y])
ideal m = (x, y)
module unit = coker([[x - 1]])
module point = quotient(m)
module plane = free(1)
module line = coker([[y]])
task gm_comparison Z two depth=6
task gm_comparison Z3 two depth=6
task gm_comparison Z8 two depth=6
task gm_comparison mixed two depth=6
task gm_comparison unit m depth=6
task gm_comparison point m depth=6
task gm_comparison plane m depth=6
task gm_comparison line m depth=6
task factorization Z two depth=6
task factorization Z3 two depth=6
task factorization Z8 two depth=6
task factorization mixed two depth=6
task factorization unit m depth=6
task factorization point m depth=6
task factorization plane m depth=6
task factorization line m depth=6
";

const SPECTRAL_EDGE: &str = "\
# K(2) plus K(3) shifted up by two, completed at 2
ring Z = ZZ
ideal two = (2)
ideal three = (3)
complex C = koszul(two) ++ shift(koszul(three), 2)
task spectral_edge C two
task derived_completion C two
";

const BASECHANGE_POS: &str = "\
# Z -> Z[1/3] at 2: nothing changes modulo powers of 2
ring Z = ZZ
ring S = poly(ZZ, [t]) / (3*t - 1)
map theta = ringmap(Z -> S)
ideal I = (2) in Z
ideal J = (2) in S
task base_change theta I J
";

const BASECHANGE_GAP: &str = "\
# Q[x] -> Q[x]/(x^3) at x: equal residue rings, different completions
ring R = poly(QQ, [x])
ring S = R / (x^3)
map theta = ringmap(R -> S, x -> x)
ideal I = (x) in R
ideal J = (x) in S
task base_change theta I J
";

const RADICAL_INVARIANCE: &str = "\
# the conditions depend only on the radical of the ideal
ring R = poly(QQ, [x])
ideal I = (x)
module point = quotient(I)
module unit = coker([[x - 1]])
task radical_invariance point I exponents=[2] depth=4
task radical_invariance unit I exponents=[3] depth=4
task radical_invariance unit I exponents=[1] depth=4
";

const WPR: &str = "\
# positive Koszul homology systems are pro-zero
ring Qx = poly(QQ, [x])
ideal I = (x)
ring A = poly(QQ, [x, y]) / (x*y)
ideal J = (x)
task wpr I depth=4
task wpr J depth=4
";

const FINITE_ORACLE: &str = "\
# Hom, tensor, Ext and Tor sizes against brute-force enumeration
ring Z8 = ZZ/8
module A = coker([[2]])
module B = coker([[4]])
module C = coker([[2, 4], [0, 2]])
module F = free(1)
ring T = poly(GF(2), [x]) / (x^3)
module P = coker([[x]])
module Q = coker([[x^2]])
module U = coker([[x, x^2], [0, x]])
task finite_oracle A B
task finite_oracle C A
task finite_oracle F C
task finite_oracle P Q
task finite_oracle U P
task finite_oracle Q U
";
