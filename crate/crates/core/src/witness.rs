//! Witness schemas and computer-algebra scripts.
//!
//! For an admissible pair `(d; e)` the library can lay out an explicit
//! construction certificate: equations `g_1,...,g_{k+1}` cutting out the
//! surface, and threefold equations of the shape
//!
//! ```text
//! f_i = sum_{j <= iota(i)} h_{i,j} * g_j        deg h_{i,j} = d_i - e_j
//! ```
//!
//! where `iota` is the index function from [`crate::seq::index_function`].
//! Instantiating the `g` and `h` polynomials with random dense coefficients
//! produces, for generic draws, a threefold whose singular locus consists of
//! exactly the predicted number of nodes, all sitting on the surface.  The
//! schema records the combinatorial layout; [`emit_cas_script`] turns it
//! into a standalone script for a Gröbner-capable computer-algebra system
//! that recomputes the singular locus and compares cardinalities.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::count::{node_count, NodeCount};
use crate::error::{Error, Result};
use crate::seq::{iota_unchecked, require_admissible, ConfigPair};

// ===========================================================================
// Schemas
// ===========================================================================

/// Degree slot for one coefficient polynomial `h_{i,j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffDegree {
    /// The term is absent from the decomposition (column beyond `iota(i)`,
    /// or a negative degree in the final column of the last row).
    StructuralZero,
    /// The term is present with a polynomial of this degree; degree 0 means
    /// a nonzero scalar.
    Degree(u64),
}

impl CoeffDegree {
    pub fn is_structural_zero(self) -> bool {
        matches!(self, CoeffDegree::StructuralZero)
    }
}

/// The combinatorial layout of a witness construction for one admissible
/// pair.
///
/// Guaranteed properties of the generic instantiation, carried as metadata:
/// every intermediate complete intersection in the chain is smooth in
/// codimension three; the threefold acquires exactly `predicted_nodes`
/// nodes, all on the surface; and the surface fails to be a Cartier divisor
/// on the threefold precisely when `predicted_nodes > 0` (the
/// [`WitnessSchema::non_cartier`] flag).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSchema {
    pub pair: ConfigPair,
    /// Dimension of the ambient projective space, `k + 3`.
    pub ambient_dim: usize,
    /// `iota(1), ..., iota(k)` — how many surface equations each threefold
    /// equation draws on.
    pub iota: Vec<usize>,
    /// `k` rows by `k+1` columns of coefficient degrees; entry `(i, j)` is
    /// structurally zero exactly when `j > iota(i)` or `d_i < e_j`.
    pub coeff_degrees: Vec<Vec<CoeffDegree>>,
    pub predicted_nodes: NodeCount,
    /// Whether the surface is *not* Cartier on the threefold; equivalent to
    /// `predicted_nodes > 0`.
    pub non_cartier: bool,
}

/// Builds the witness schema for an admissible pair.
pub fn build_schema(pair: &ConfigPair) -> Result<WitnessSchema> {
    require_admissible(pair)?;
    let d = pair.d().values();
    let e = pair.e().values();
    let k = pair.k();
    let iota: Vec<usize> = (1..=k).map(|i| iota_unchecked(d, e, i)).collect();
    let coeff_degrees: Vec<Vec<CoeffDegree>> = (1..=k)
        .map(|i| {
            (1..=k + 1)
                .map(|j| {
                    if j > iota[i - 1] || d[i - 1] < e[j - 1] {
                        CoeffDegree::StructuralZero
                    } else {
                        CoeffDegree::Degree(d[i - 1] - e[j - 1])
                    }
                })
                .collect()
        })
        .collect();
    let predicted_nodes = node_count(pair);
    let non_cartier = predicted_nodes.is_positive();
    Ok(WitnessSchema {
        pair: pair.clone(),
        ambient_dim: k + 3,
        iota,
        coeff_degrees,
        predicted_nodes,
        non_cartier,
    })
}

/// Independent node-count oracle for hypersurfaces (`k = 1`): a generic
/// degree-`d` threefold through a generic complete-intersection surface of
/// bidegree `(e1, e2)` acquires `e1*e2*(d-e1)*(d-e2)` nodes on it.
///
/// Requires `1 <= e1 <= e2 <= d`.
pub fn k1_node_oracle(d: u64, e1: u64, e2: u64) -> Result<NodeCount> {
    if e1 < 1 || e1 > e2 || e2 > d {
        return Err(Error::OracleRange { d, e1, e2 });
    }
    let v = BigInt::from(e1) * BigInt::from(e2) * BigInt::from(d - e1) * BigInt::from(d - e2);
    Ok(NodeCount::from(v))
}

// ===========================================================================
// Script emission
// ===========================================================================

/// Coefficient field for the emitted script.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientField {
    /// A prime field `GF(p)`; `p` must be a prime of at least 101 that
    /// exceeds every degree in the schema.
    Prime(u64),
    /// The rational numbers.  Coefficients are still drawn as bounded
    /// integers so the script stays readable.
    Rationals,
}

/// Target computer-algebra system; the mathematical content is identical,
/// only syntax and the locus commands differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScriptDialect {
    #[default]
    Singular,
    Macaulay2,
}

impl ScriptDialect {
    pub fn as_str(self) -> &'static str {
        match self {
            ScriptDialect::Singular => "singular",
            ScriptDialect::Macaulay2 => "macaulay2",
        }
    }
}

impl std::str::FromStr for ScriptDialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singular" => Ok(ScriptDialect::Singular),
            "macaulay2" | "m2" => Ok(ScriptDialect::Macaulay2),
            other => Err(Error::ParseSequence(other.into())),
        }
    }
}

/// Coefficient range used over the rationals, so that draws stay small and
/// deterministic without a characteristic to reduce by.
const RATIONAL_COEFF_MODULUS: u64 = 2_147_483_647;

/// The 64-bit linear congruential generator that drives every coefficient
/// draw.  One step per coefficient slot, in emission order; reproducing the
/// sequence outside this tool only needs these two constants and the seed.
struct Lcg(u64);

impl Lcg {
    const MUL: u64 = 6364136223846793005;
    const INC: u64 = 1442695040888963407;

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(Self::MUL).wrapping_add(Self::INC);
        self.0
    }

    /// A coefficient in `0..modulus`.
    fn coeff(&mut self, modulus: u64) -> u64 {
        self.next() % modulus
    }

    /// A coefficient in `1..modulus`, for slots that must not vanish.
    fn nonzero_coeff(&mut self, modulus: u64) -> u64 {
        1 + self.next() % (modulus - 1)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Visits every exponent vector of the given total degree, first variable's
/// exponent descending — the fixed emission order for dense polynomials.
fn for_each_exponent(nvars: usize, total: u64, f: &mut impl FnMut(&[u64])) {
    let mut buf = vec![0u64; nvars];
    fn rec(pos: usize, remaining: u64, buf: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if pos + 1 == buf.len() {
            buf[pos] = remaining;
            f(buf);
            return;
        }
        let mut v = remaining;
        loop {
            buf[pos] = v;
            rec(pos + 1, remaining - v, buf, f);
            if v == 0 {
                break;
            }
            v -= 1;
        }
    }
    rec(0, total, &mut buf, f);
}

fn monomial_text(exps: &[u64], var: &dyn Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (idx, &ex) in exps.iter().enumerate() {
        match ex {
            0 => {}
            1 => parts.push(var(idx)),
            _ => parts.push(format!("{}^{}", var(idx), ex)),
        }
    }
    parts.join("*")
}

/// A dense polynomial of the given degree with freshly drawn coefficients.
fn dense_poly(
    degree: u64,
    nvars: usize,
    lcg: &mut Lcg,
    modulus: u64,
    var: &dyn Fn(usize) -> String,
) -> String {
    if degree == 0 {
        return lcg.nonzero_coeff(modulus).to_string();
    }
    let mut terms: Vec<String> = Vec::new();
    for_each_exponent(nvars, degree, &mut |exps| {
        let c = lcg.coeff(modulus);
        if c != 0 {
            terms.push(format!("{}*{}", c, monomial_text(exps, var)));
        }
    });
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn max_schema_degree(schema: &WitnessSchema) -> u64 {
    schema.pair.d().last().max(schema.pair.e().last())
}

/// Renders a self-contained computer-algebra script that instantiates the
/// schema over the requested coefficient field and recomputes the singular
/// locus of the threefold.
///
/// The output is a pure function of `(schema, field, seed, dialect)`: the
/// same inputs give byte-identical text on every run and platform.  The
/// script ends by printing a single machine-readable line
/// `NODES expected=<predicted> computed=<count>`.
///
/// A genericity failure (a disagreeing count over an unlucky draw) is
/// handled by re-running with a different seed, as noted in the script
/// header; the emitter never retries silently.
pub fn emit_cas_script(
    schema: &WitnessSchema,
    field: CoefficientField,
    seed: u64,
    dialect: ScriptDialect,
) -> Result<String> {
    let modulus = match field {
        CoefficientField::Prime(p) => {
            if p < 101 {
                return Err(Error::FieldTooSmall(p));
            }
            if !is_prime(p) {
                return Err(Error::FieldNotPrime(p));
            }
            let deg = max_schema_degree(schema);
            if p <= deg {
                return Err(Error::FieldDegreeClash { p, deg });
            }
            p
        }
        CoefficientField::Rationals => RATIONAL_COEFF_MODULUS,
    };

    let k = schema.pair.k();
    let nvars = k + 4;
    let mut lcg = Lcg(seed);

    let (comment, var): (&str, Box<dyn Fn(usize) -> String>) = match dialect {
        ScriptDialect::Singular => ("//", Box::new(|i| format!("x({i})"))),
        ScriptDialect::Macaulay2 => ("--", Box::new(|i| format!("x_{i}"))),
    };

    let field_text = match field {
        CoefficientField::Prime(p) => format!("GF({p})"),
        CoefficientField::Rationals => "QQ".to_string(),
    };

    let mut s = String::new();
    let w = &mut s;
    writeln!(w, "{comment} witness construction script ({} dialect)", dialect.as_str()).unwrap();
    writeln!(w, "{comment} schema: ci-nodes/witness/v1").unwrap();
    writeln!(w, "{comment} tool: ci-nodes {}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(w, "{comment} d: {}", schema.pair.d()).unwrap();
    writeln!(w, "{comment} e: {}", schema.pair.e()).unwrap();
    let iota_text: Vec<String> = schema.iota.iter().map(|v| v.to_string()).collect();
    writeln!(w, "{comment} iota: {}", iota_text.join(",")).unwrap();
    writeln!(w, "{comment} field: {field_text}").unwrap();
    writeln!(w, "{comment} seed: {seed}").unwrap();
    writeln!(
        w,
        "{comment} rng: state <- state*{} + {} mod 2^64, starting from the seed;",
        Lcg::MUL,
        Lcg::INC
    )
    .unwrap();
    writeln!(
        w,
        "{comment}      one draw per coefficient slot in emission order (g1..g{}, then h rows),",
        k + 1
    )
    .unwrap();
    writeln!(
        w,
        "{comment}      reduced mod {modulus}; degree-0 slots map into 1..{}",
        modulus - 1
    )
    .unwrap();
    writeln!(
        w,
        "{comment} guarantees for generic draws: intermediate intersections smooth in codimension three;"
    )
    .unwrap();
    writeln!(
        w,
        "{comment}      exactly the predicted nodes, all on the surface V(g1..g{});",
        k + 1
    )
    .unwrap();
    writeln!(
        w,
        "{comment}      the surface is non-Cartier on the threefold iff the prediction is positive"
    )
    .unwrap();
    writeln!(
        w,
        "{comment} if the computed count disagrees, re-run with a fresh seed before concluding anything"
    )
    .unwrap();
    writeln!(w, "{comment} predicted nodes: {}", schema.predicted_nodes).unwrap();

    let e = schema.pair.e().values();

    match dialect {
        ScriptDialect::Singular => {
            let char_text = match field {
                CoefficientField::Prime(p) => p.to_string(),
                CoefficientField::Rationals => "0".to_string(),
            };
            writeln!(w, "ring R = {char_text}, (x(0..{})), dp;", nvars - 1).unwrap();
        }
        ScriptDialect::Macaulay2 => {
            let ring_text = match field {
                CoefficientField::Prime(p) => format!("ZZ/{p}"),
                CoefficientField::Rationals => "QQ".to_string(),
            };
            writeln!(w, "R = {ring_text}[x_0..x_{}];", nvars - 1).unwrap();
        }
    }

    let assign = |name: &str, body: &str| -> String {
        match dialect {
            ScriptDialect::Singular => format!("poly {name} = {body};"),
            ScriptDialect::Macaulay2 => format!("{name} = {body};"),
        }
    };

    for (j, &ej) in e.iter().enumerate() {
        let body = dense_poly(ej, nvars, &mut lcg, modulus, var.as_ref());
        writeln!(w, "{}", assign(&format!("g{}", j + 1), &body)).unwrap();
    }
    for i in 1..=k {
        for j in 1..=k + 1 {
            if let CoeffDegree::Degree(deg) = schema.coeff_degrees[i - 1][j - 1] {
                let body = dense_poly(deg, nvars, &mut lcg, modulus, var.as_ref());
                writeln!(w, "{}", assign(&format!("hr{i}c{j}"), &body)).unwrap();
            }
        }
    }
    for i in 1..=k {
        let sum: Vec<String> = (1..=k + 1)
            .filter(|&j| !schema.coeff_degrees[i - 1][j - 1].is_structural_zero())
            .map(|j| format!("hr{i}c{j}*g{j}"))
            .collect();
        writeln!(w, "{}", assign(&format!("f{i}"), &sum.join(" + "))).unwrap();
    }

    let f_list: Vec<String> = (1..=k).map(|i| format!("f{i}")).collect();
    let expected = &schema.predicted_nodes;
    match dialect {
        ScriptDialect::Singular => {
            writeln!(w, "ideal I = {};", f_list.join(", ")).unwrap();
            writeln!(w, "ideal J = I + minor(jacob(I), {k});").unwrap();
            writeln!(w, "ideal SL = std(J);").unwrap();
            writeln!(w, "int sdim = dim(SL);").unwrap();
            writeln!(
                w,
                "{comment} sanity: the cone over a finite singular locus has dimension at most 1"
            )
            .unwrap();
            writeln!(
                w,
                "if (sdim > 1) {{ print(\"WARNING singular locus has positive dimension\"); }}"
            )
            .unwrap();
            writeln!(w, "int computed;").unwrap();
            writeln!(w, "if (sdim <= 0) {{ computed = 0; }} else {{ computed = mult(SL); }}").unwrap();
            writeln!(w, "print(\"SINGDIM dim=\" + string(sdim));").unwrap();
            writeln!(
                w,
                "print(\"NODES expected={expected} computed=\" + string(computed));"
            )
            .unwrap();
            writeln!(w, "quit;").unwrap();
        }
        ScriptDialect::Macaulay2 => {
            writeln!(w, "I = ideal({});", f_list.join(", ")).unwrap();
            writeln!(w, "J = I + minors({k}, jacobian I);").unwrap();
            writeln!(w, "sdim = dim J;").unwrap();
            writeln!(
                w,
                "{comment} sanity: the cone over a finite singular locus has dimension at most 1"
            )
            .unwrap();
            writeln!(
                w,
                "if sdim > 1 then << \"WARNING singular locus has positive dimension\" << endl;"
            )
            .unwrap();
            writeln!(w, "computed = if sdim <= 0 then 0 else degree J;").unwrap();
            writeln!(w, "<< \"SINGDIM dim=\" << sdim << endl;").unwrap();
            writeln!(
                w,
                "<< \"NODES expected={expected} computed=\" << computed << endl;"
            )
            .unwrap();
            writeln!(w, "exit 0").unwrap();
        }
    }

    Ok(s)
}

// ===========================================================================
// Tests
// ===========================================================================
