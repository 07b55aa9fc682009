//! Named quotient spaces, their dimensions, and the certified vanishing of
//! forests with a component of degree at least two.
//!
//! | space  | basis                       | relations                 |
//! |--------|-----------------------------|---------------------------|
//! | `bhsl` | non-boring forests          | IHX                        |
//! | `bhl`  | non-boring forests          | IHX, star                  |
//! | `ahsl` | non-boring bounded diagrams | STU, IHX                   |
//! | `ahl`  | non-boring bounded diagrams | STU, IHX, link1            |
//! | `chord`| chord diagrams on a circle  | 1T, 4T                     |

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chord::enum_chord;
use crate::diagram::{Color, Diagram, DiagramError, Key};
use crate::enumerate::{attachments, enum_bounded, enum_forests};
use crate::lincomb::{LinComb, Q};
use crate::qlinalg::{CertificateDoc, CertificateError, Echelon, LinalgError, MembershipCertificate};
use crate::relators::{
    add_bounded_scaled, four_t_relators, homotopy_relators, ihx_relators, link1_relators_on, one_t_relators,
    stu_relators_on, Relator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Bhsl,
    Bhl,
    Ahsl,
    Ahl,
    Chord,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Bhsl => "bhsl",
            Space::Bhl => "bhl",
            Space::Ahsl => "ahsl",
            Space::Ahl => "ahl",
            Space::Chord => "chord",
        }
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, Space::Ahsl | Space::Ahl)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "bhsl" => Space::Bhsl,
            "bhl" => Space::Bhl,
            "ahsl" => Space::Ahsl,
            "ahl" => Space::Ahl,
            "chord" | "knot" => Space::Chord,
            other => return Err(format!("unknown space {other:?}")),
        })
    }
}

/// Size limits. A `(k, d)` request is allowed when some listed pair bounds
/// it in both coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub forests: Vec<(u8, usize)>,
    pub bounded: Vec<(u8, usize)>,
    pub chord_max_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            forests: vec![(5, 3), (4, 4)],
            bounded: vec![(4, 3), (3, 4)],
            chord_max_degree: 5,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            forests: vec![(u8::MAX, usize::MAX)],
            bounded: vec![(u8::MAX, usize::MAX)],
            chord_max_degree: usize::MAX,
        }
    }

    pub fn allows(&self, space: Space, k: u8, d: usize) -> bool {
        let within = |cells: &[(u8, usize)]| cells.iter().any(|&(kk, dd)| k <= kk && d <= dd);
        match space {
            Space::Chord => d <= self.chord_max_degree,
            Space::Ahsl | Space::Ahl => within(&self.bounded),
            Space::Bhsl | Space::Bhl => within(&self.forests),
        }
    }
}

#[derive(Debug, Error)]
pub enum SpacesError {
    #[error("{space}(k={k}, d={d}) exceeds the configured budget")]
    Budget { space: Space, k: u8, d: usize },
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("counterexample: {key} is not in the relation span")]
    Counterexample { key: Key, residual: LinComb },
    #[error("certificate for {key} failed to re-verify: {source}")]
    Certificate { key: Key, source: CertificateError },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("{0} is not a homotopy diagram")]
    NotHomotopy(Key),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad certificate file {path}: {reason}")]
    BadBundle { path: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub space: Space,
    pub k: u8,
    pub d: usize,
    pub basis_size: usize,
    pub relators: BTreeMap<String, usize>,
    pub rank: usize,
    pub dimension: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SpaceReport {
    pub fn label(&self) -> String {
        match self.space {
            Space::Chord => format!("chord_{}", self.d),
            s => format!("{}({})_{}", s.name(), self.k, self.d),
        }
    }
}

/// Basis and relators of `space` at `(k, d)`; `k` is ignored for chords.
pub fn relation_system(space: Space, k: u8, d: usize) -> Result<(Vec<Key>, Vec<Relator>), SpacesError> {
    if space != Space::Chord && k == 0 {
        return Err(SpacesError::Unsupported("k must be at least 1".into()));
    }
    Ok(match space {
        Space::Bhsl => {
            let basis = enum_forests(k, d);
            let rels = ihx_relators(&basis);
            (basis, rels)
        }
        Space::Bhl => homotopy_relators(k, d),
        Space::Ahsl | Space::Ahl => {
            let basis = enum_bounded(k, d);
            let mut rels = stu_relators_on(&basis);
            rels.extend(ihx_relators(&basis));
            if space == Space::Ahl {
                rels.extend(link1_relators_on(&basis));
            }
            (basis, rels)
        }
        Space::Chord => {
            let basis: Vec<Key> = enum_chord(d).iter().map(|c| c.key()).collect();
            let mut rels = one_t_relators(d);
            rels.extend(four_t_relators(d));
            (basis, rels)
        }
    })
}

/// Relation span of `space` at `(k, d)`, within `budget`.
pub fn echelon(space: Space, k: u8, d: usize, budget: &Budget) -> Result<(Echelon, BTreeMap<String, usize>), SpacesError> {
    if !budget.allows(space, k, d) {
        return Err(SpacesError::Budget { space, k, d });
    }
    let (basis, rels) = relation_system(space, k, d)?;
    let mut counts = BTreeMap::new();
    for r in &rels {
        let tag = r.kind().map_or("other", |t| t.tag());
        *counts.entry(tag.to_string()).or_insert(0) += 1;
    }
    Ok((Echelon::build(basis, &rels)?, counts))
}

pub fn dim_space(space: Space, k: u8, d: usize, budget: &Budget) -> Result<SpaceReport, SpacesError> {
    let start = Instant::now();
    let (ech, relators) = echelon(space, k, d, budget)?;
    Ok(SpaceReport {
        space,
        k: if space == Space::Chord { 0 } else { k },
        d,
        basis_size: ech.basis().len(),
        relators,
        rank: ech.rank(),
        dimension: ech.quotient_dim(),
        elapsed: start.elapsed(),
    })
}

pub fn dim_knot_chord(d: usize, budget: &Budget) -> Result<SpaceReport, SpacesError> {
    dim_space(Space::Chord, 0, d, budget)
}

/// One certified vanishing: a basis forest and its membership proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certified {
    pub key: Key,
    pub k: u8,
    pub degree: usize,
    pub certificate: MembershipCertificate,
}

/// Certify that every basis forest of degree `<= d_max` with a component
/// of degree at least two lies in the star + IHX span. Certificates are
/// re-verified from relator ids before being returned.
pub fn verify_main_theorem(k: u8, d_max: usize, budget: &Budget) -> Result<Vec<Certified>, SpacesError> {
    if k < 3 {
        return Err(SpacesError::Unsupported("needs at least three colors".into()));
    }
    let mut out = Vec::new();
    for d in 2..=d_max {
        let (ech, _) = echelon(Space::Bhl, k, d, budget)?;
        for key in ech.basis() {
            let forest = Diagram::from_key(key)?;
            if forest.max_component_degree() < 2 {
                continue;
            }
            let cert = ech.membership(&LinComb::single(key.clone(), Q::one()))?;
            if !cert.is_member() {
                return Err(SpacesError::Counterexample {
                    key: key.clone(),
                    residual: cert.residual,
                });
            }
            cert.verify().map_err(|source| SpacesError::Certificate {
                key: key.clone(),
                source,
            })?;
            out.push(Certified {
                key: key.clone(),
                k,
                degree: d,
                certificate: cert,
            });
        }
    }
    Ok(out)
}

/// On-disk form: one `<hexkey>.json` per certified forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub key: String,
    pub k: u8,
    pub degree: usize,
    pub certificate: CertificateDoc,
}

pub fn write_certificate_bundle(dir: &Path, certs: &[Certified]) -> Result<(), SpacesError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| SpacesError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    for c in certs {
        let file = CertificateFile {
            key: c.key.to_hex(),
            k: c.k,
            degree: c.degree,
            certificate: c.certificate.to_doc(),
        };
        let path = dir.join(format!("{}.json", c.key.to_hex()));
        let text = serde_json::to_string_pretty(&file).expect("certificates serialize");
        std::fs::write(&path, text + "\n").map_err(io(&path))?;
    }
    Ok(())
}

/// Re-verify every certificate file in `dir`; returns how many were checked.
pub fn check_certificate_bundle(dir: &Path) -> Result<usize, SpacesError> {
    let entries = std::fs::read_dir(dir).map_err(|source| SpacesError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for path in &paths {
        check_certificate_file(path)?;
    }
    Ok(paths.len())
}

pub fn check_certificate_file(path: &Path) -> Result<(), SpacesError> {
    let name = path.display().to_string();
    let bad = |reason: String| SpacesError::BadBundle {
        path: name.clone(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|source| SpacesError::Io {
        path: name.clone(),
        source,
    })?;
    let file: CertificateFile = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let key = Key::from_hex(&file.key).map_err(|e| bad(e.to_string()))?;
    let cert = MembershipCertificate::from_doc(&file.certificate).map_err(|e| bad(e.to_string()))?;
    if cert.target != LinComb::single(key.clone(), Q::one()) {
        return Err(bad("target is not the named forest".into()));
    }
    if !cert.is_member() {
        return Err(bad("residual is nonzero".into()));
    }
    cert.verify().map_err(|source| SpacesError::Certificate { key, source })
}

/// Exponents `e_ij` (`i < j`) of a monomial in the variables `x_ij`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub BTreeMap<(u8, u8), u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn degree(&self) -> usize {
        self.0.values().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (&v, &e) in &other.0 {
            *out.0.entry(v).or_insert(0) += e;
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(&(i, j), &e)| if e == 1 { format!("x{i}{j}") } else { format!("x{i}{j}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// All monomials of total degree `d` in the `C(k, 2)` variables.
pub fn monomial_basis(k: u8, d: usize) -> Vec<Monomial> {
    let vars: Vec<(u8, u8)> = (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    fn rec(vars: &[(u8, u8)], left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => {
                if left == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&v, rest)) => {
                for e in 0..=left {
                    if e > 0 {
                        cur.0.insert(v, e as u32);
                    }
                    rec(rest, left - e, cur, out);
                    cur.0.remove(&v);
                }
            }
        }
    }
    rec(&vars, d, &mut Monomial::one(), &mut out);
    out.sort();
    out
}

pub type Polynomial = BTreeMap<Monomial, Q>;

/// Image in the polynomial algebra: segment forests go to their monomial,
/// anything with a larger component goes to zero.
pub fn reduce_to_monomials(l: &LinComb, k: u8) -> Result<Polynomial, SpacesError> {
    let mut out = Polynomial::new();
    for (key, c) in l.iter() {
        let d = Diagram::from_key(key)?;
        if d.k() != k {
            return Err(SpacesError::Unsupported(format!("diagram has k={}, expected {k}", d.k())));
        }
        if d.is_boring() {
            return Err(SpacesError::NotHomotopy(key.clone()));
        }
        if !d.is_segment_forest() {
            continue;
        }
        let mut m = Monomial::one();
        for i in 1..=k {
            for j in i + 1..=k {
                let n = d.count_segments(Color::new(i), Color::new(j))?;
                if n > 0 {
                    m.0.insert((i, j), n as u32);
                }
            }
        }
        let entry = out.entry(m).or_insert_with(Q::zero);
        *entry += c;
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

pub fn reduce_diagram(d: &Diagram) -> Result<Polynomial, SpacesError> {
    let mut l = LinComb::new();
    l.add_homotopy(d, &Q::one())?;
    reduce_to_monomials(&l, d.k())
}

pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = Polynomial::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.mul(mb)).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Average of all leg orderings of `b` on its segments. Boring and
/// antisymmetry-null diagrams go to zero.
pub fn chi(b: &Diagram) -> LinComb {
    let mut out = LinComb::new();
    if b.is_boring() {
        return out;
    }
    let ways: BigInt = (1..=b.k())
        .map(|c| factorial(b.legs_of_color(Color::new(c)).len()))
        .product();
    let weight = Q::new(BigInt::one(), ways);
    for a in attachments(b) {
        add_bounded_scaled(&mut out, &a, &weight);
    }
    out
}

/// `chi` extended linearly over forest keys.
pub fn chi_lincomb(l: &LinComb) -> Result<LinComb, SpacesError> {
    let mut out = LinComb::new();
    for (key, c) in l.iter() {
        let d = Diagram::from_key(key)?;
        out.add_scaled(&chi(&d), c);
    }
    Ok(out)
}

/// Check that `chi` maps every IHX relator at `(k, d)` into the STU span.
/// Returns the number of relators checked.
pub fn chi_ihx_in_stu(k: u8, d: usize, budget: &Budget) -> Result<usize, SpacesError> {
    if !budget.allows(Space::Ahsl, k, d) {
        return Err(SpacesError::Budget {
            space: Space::Ahsl,
            k,
            d,
        });
    }
    let bounded = enum_bounded(k, d);
    let stu = stu_relators_on(&bounded);
    let ech = Echelon::build(bounded, &stu)?;
    let rels = ihx_relators(&enum_forests(k, d));
    for r in &rels {
        let image = chi_lincomb(&r.element)?;
        let cert = ech.membership(&image)?;
        if !cert.is_member() {
            return Err(SpacesError::Counterexample {
                key: r.element.keys().next().cloned().unwrap_or_else(|| Key::from_bytes(vec![])),
                residual: cert.residual,
            });
        }
    }
    Ok(rels.len())
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of the degree-`d` part of the polynomial algebra on `C(k, 2)`
/// generators.
pub fn monomial_count(k: u8, d: usize) -> u64 {
    let vars = binomial(k as u64, 2);
    if vars == 0 {
        return u64::from(d == 0);
    }
    binomial(vars + d as u64 - 1, d as u64)
}
