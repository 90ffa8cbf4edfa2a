//! Combinatorial train tracks with weight systems, specialized to the two
//! standard tracks on the once-punctured torus.
//!
//! A track is a branched 1-complex: branches meet at trivalent-or-higher
//! switches, and a weight system assigns each branch a value so that at every
//! switch the weights coming in on one side sum to the weights leaving on the
//! other.  Rational-slope simple closed curves are realized as cyclic edge
//! words (Christoffel words in the two main branches, with a connector branch
//! between letters), and transverse-measure masses of edge paths reduce to
//! exact integer subword counts.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrackError {
    #[error("weight system has {got} values but the track has {want} branches")]
    WeightCount { got: usize, want: usize },
    #[error("nonnegative weight system carries negative weight {0} on branch {1}")]
    NegativeWeight(f64, usize),
    #[error("slope {0}/{1} is not in lowest terms")]
    NotCoprime(i64, i64),
    #[error("slope 0/0 is not a slope")]
    ZeroSlope,
    #[error("branches {0} and {1} are not consecutively traversable")]
    NotTraversable(usize, usize),
    #[error("edge path of length {0} cannot be chopped (need odd length >= 3)")]
    ChopLength(usize),
    #[error("cyclic word is empty or not primitive")]
    BadWord,
    #[error("malformed track: {0}")]
    BadTrack(String),
}

/// One end of a branch: branch index plus which of its two ends (0 or 1).
pub type BranchEnd = (usize, u8);

/// A switch with its incident branch-ends split into two sides.
#[derive(Debug, Clone)]
pub struct Switch {
    pub left: Vec<BranchEnd>,
    pub right: Vec<BranchEnd>,
}

/// A branched 1-complex.  Branch indices run 0..num_branches.
#[derive(Debug, Clone)]
pub struct TrainTrack {
    pub num_branches: usize,
    pub switches: Vec<Switch>,
}

impl TrainTrack {
    pub fn new(num_branches: usize, switches: Vec<Switch>) -> Result<Self, TrackError> {
        let track = TrainTrack { num_branches, switches };
        let mut end_count = vec![[0usize; 2]; num_branches];
        for (si, sw) in track.switches.iter().enumerate() {
            if sw.left.is_empty() || sw.right.is_empty() {
                return Err(TrackError::BadTrack(format!("switch {si} has an empty side")));
            }
            for &(b, e) in sw.left.iter().chain(&sw.right) {
                if b >= num_branches || e > 1 {
                    return Err(TrackError::BadTrack(format!(
                        "switch {si} references invalid branch end ({b},{e})"
                    )));
                }
                end_count[b][e as usize] += 1;
            }
        }
        for (b, c) in end_count.iter().enumerate() {
            if *c != [1, 1] {
                return Err(TrackError::BadTrack(format!(
                    "branch {b} ends attached {c:?} times (want [1,1])"
                )));
            }
        }
        Ok(track)
    }

    /// Whether two branches can be traversed consecutively: they must have
    /// ends on opposite sides of a common switch.
    pub fn traversable(&self, from: usize, to: usize) -> bool {
        self.switches.iter().any(|sw| {
            let on = |side: &[BranchEnd], b: usize| side.iter().any(|&(x, _)| x == b);
            (on(&sw.left, from) && on(&sw.right, to)) || (on(&sw.right, from) && on(&sw.left, to))
        })
    }
}

/// Which quotient the branch weights live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// Transverse-measure masses: real, >= 0.
    Nonnegative,
    /// Tangential (shearing) weights: real.
    Real,
    /// Bending angles, defined modulo 2*pi.
    Angle,
    /// Complex shear-bend weights, defined modulo 2*pi*i.
    ComplexMod2PiI,
}

/// One value per branch, satisfying the switch relations.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    pub kind: WeightKind,
    pub values: Vec<Complex64>,
}

impl WeightSystem {
    pub fn real(kind: WeightKind, values: &[f64]) -> Self {
        WeightSystem {
            kind,
            values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// Plain-text table, one `branch<TAB>value` line per branch.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (b, v) in self.values.iter().enumerate() {
            if v.im == 0.0 {
                out.push_str(&format!("{b}\t{:.14e}\n", v.re));
            } else {
                out.push_str(&format!("{b}\t{:.14e}\t{:.14e}\n", v.re, v.im));
            }
        }
        out
    }
}

fn wrap_to_pi(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI { y - TAU } else { y }
}

/// Max over switches of the side-sum mismatch, measured in the weight kind's
/// quotient.  Also rejects negative weights for the nonnegative kind.
pub fn validate_switch_relations(track: &TrainTrack, w: &WeightSystem) -> Result<f64, TrackError> {
    if w.values.len() != track.num_branches {
        return Err(TrackError::WeightCount { got: w.values.len(), want: track.num_branches });
    }
    if w.kind == WeightKind::Nonnegative {
        for (b, v) in w.values.iter().enumerate() {
            if v.re < 0.0 || v.im != 0.0 {
                return Err(TrackError::NegativeWeight(v.re, b));
            }
        }
    }
    let mut worst = 0.0_f64;
    for sw in &track.switches {
        let sum = |side: &[BranchEnd]| -> Complex64 {
            side.iter().map(|&(b, _)| w.values[b]).sum()
        };
        let diff = sum(&sw.left) - sum(&sw.right);
        let residual = match w.kind {
            WeightKind::Nonnegative | WeightKind::Real => diff.norm(),
            WeightKind::Angle => wrap_to_pi(diff.re).abs().hypot(diff.im),
            WeightKind::ComplexMod2PiI => diff.re.hypot(wrap_to_pi(diff.im)),
        };
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// The two standard punctured-torus tracks: one carries slopes in [0, +inf],
/// the other slopes in [-inf, 0].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardTrack {
    Positive,
    Negative,
}

/// Branch indices on the standard tracks.
pub const BRANCH_A: usize = 0;
pub const BRANCH_B: usize = 1;
pub const BRANCH_C: usize = 2;

/// The standard 3-branch, 2-switch track.  Branches a and b enter switch 0
/// together and leave switch 1 together; the connector c runs between the
/// lone sides.  Switch relation at both switches: w_a + w_b = w_c.
/// Both charts share this combinatorial type; they differ only in how the
/// branches wind on the surface, which this module does not record.
pub fn standard_track(_which: StandardTrack) -> TrainTrack {
    TrainTrack::new(
        3,
        vec![
            Switch {
                left: vec![(BRANCH_A, 0), (BRANCH_B, 0)],
                right: vec![(BRANCH_C, 0)],
            },
            Switch {
                left: vec![(BRANCH_C, 1)],
                right: vec![(BRANCH_A, 1), (BRANCH_B, 1)],
            },
        ],
    )
    .expect("standard track is well formed")
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_slope(p: i64, q: i64) -> Result<(), TrackError> {
    if p == 0 && q == 0 {
        return Err(TrackError::ZeroSlope);
    }
    if gcd(p, q) != 1 {
        return Err(TrackError::NotCoprime(p, q));
    }
    Ok(())
}

/// Which standard chart carries slope p/q.
pub fn chart_for_slope(p: i64, q: i64) -> StandardTrack {
    if p * q >= 0 { StandardTrack::Positive } else { StandardTrack::Negative }
}

/// Integer weights realizing the slope-p/q simple closed curve: |p| on branch
/// a, |q| on branch b, |p|+|q| on the connector.
pub fn carry_slope(p: i64, q: i64) -> Result<(StandardTrack, WeightSystem), TrackError> {
    check_slope(p, q)?;
    let (ap, aq) = (p.unsigned_abs() as f64, q.unsigned_abs() as f64);
    Ok((
        chart_for_slope(p, q),
        WeightSystem::real(WeightKind::Nonnegative, &[ap, aq, ap + aq]),
    ))
}

/// A cyclic sequence of branches realizing a carried closed curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicEdgeWord {
    pub branches: Vec<usize>,
}

impl CyclicEdgeWord {
    pub fn new(branches: Vec<usize>) -> Result<Self, TrackError> {
        let n = branches.len();
        if n == 0 {
            return Err(TrackError::BadWord);
        }
        // primitive: no proper cyclic period
        for d in 1..n {
            if n % d == 0 && (0..n).all(|i| branches[i] == branches[(i + d) % n]) {
                return Err(TrackError::BadWord);
            }
        }
        Ok(CyclicEdgeWord { branches })
    }

    pub fn period(&self) -> usize {
        self.branches.len()
    }

    /// The subword of length `len` centered at period position `center`
    /// (`len` odd).
    pub fn subword_at(&self, center: usize, len: usize) -> EdgePath {
        let n = self.period();
        let r = len / 2;
        let branches = (0..len)
            .map(|k| self.branches[(center + n * len + k - r) % n])
            .collect();
        EdgePath { branches, center: r }
    }
}

/// A finite, consecutively traversable sequence of branches with a marked
/// center (paths of odd length 2r+1 centered on their middle branch).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath {
    pub branches: Vec<usize>,
    pub center: usize,
}

impl EdgePath {
    pub fn validate(&self, track: &TrainTrack) -> Result<(), TrackError> {
        for w in self.branches.windows(2) {
            if !track.traversable(w[0], w[1]) {
                return Err(TrackError::NotTraversable(w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// The carried cyclic word for slope p/q: the lower Christoffel word in the
/// two main branches with |p| a's and |q| b's, a connector c after each
/// letter.  Period 2(|p|+|q|).
pub fn carried_word(p: i64, q: i64) -> Result<CyclicEdgeWord, TrackError> {
    check_slope(p, q)?;
    let (a, b) = (p.unsigned_abs() as i64, q.unsigned_abs() as i64);
    let n = a + b;
    let mut branches = Vec::with_capacity(2 * n as usize);
    for k in 1..=n {
        let step = (k * a) / n - ((k - 1) * a) / n;
        branches.push(if step == 1 { BRANCH_A } else { BRANCH_B });
        branches.push(BRANCH_C);
    }
    CyclicEdgeWord::new(branches)
}

/// Number of occurrences of `path` as a subword per period of `word`
/// (cyclically, so paths longer than the period still count).
pub fn occurrences(word: &CyclicEdgeWord, path: &EdgePath) -> usize {
    let n = word.period();
    (0..n)
        .filter(|&start| {
            path.branches
                .iter()
                .enumerate()
                .all(|(k, &b)| word.branches[(start + k) % n] == b)
        })
        .count()
}

/// A transverse measure concentrated on one carried closed curve.
#[derive(Debug, Clone)]
pub struct DiracWeight {
    pub word: CyclicEdgeWord,
    pub weight: f64,
}

impl DiracWeight {
    /// Mass deposited on `path`: weight times the per-period subword count.
    pub fn edge_path_mass(&self, path: &EdgePath) -> f64 {
        self.weight * occurrences(&self.word, path) as f64
    }

    /// The induced branch weight system (weight times per-period branch counts).
    pub fn weights(&self, track: &TrainTrack) -> WeightSystem {
        let mut counts = vec![0usize; track.num_branches];
        for &b in &self.word.branches {
            counts[b] += 1;
        }
        WeightSystem::real(
            WeightKind::Nonnegative,
            &counts.iter().map(|&c| self.weight * c as f64).collect::<Vec<_>>(),
        )
    }
}

/// The itinerary of the period position `s`, read outward from the center:
/// w[s], w[s+1], w[s-1], w[s+2], w[s-2], ...  Truncated at 2n+1 letters,
/// which distinguishes any two positions of a primitive word.
fn outward_itinerary(word: &CyclicEdgeWord, s: usize) -> Vec<usize> {
    let n = word.period();
    let at = |k: i64| word.branches[(s as i64 + k).rem_euclid(n as i64) as usize];
    let mut it = vec![at(0)];
    for k in 1..=n as i64 {
        it.push(at(k));
        it.push(at(-k));
    }
    it
}

/// The period positions of `word` sorted by their outward itineraries.  This
/// is the total order realizing "which occurrence cuts the corridor closer":
/// positions sharing the same central length-(2r+1) subword form a contiguous
/// run for every r, because fixing the central letters fixes a prefix of the
/// itinerary.
pub fn position_order(word: &CyclicEdgeWord) -> Vec<usize> {
    let mut order: Vec<usize> = (0..word.period()).collect();
    order.sort_by_key(|&s| outward_itinerary(word, s));
    order
}

/// All distinct length-(2r+1) subwords of `word` with per-period
/// multiplicities, in the [`position_order`] of their occurrence centers.
/// Because occurrences of one subword are contiguous in that order, the
/// listing is compatible with the corridor order, and chopping end branches
/// never reverses it.
pub fn gamma_r_subwords(word: &CyclicEdgeWord, r: usize) -> Vec<(EdgePath, usize)> {
    let len = 2 * r + 1;
    let mut out: Vec<(EdgePath, usize)> = Vec::new();
    for center in position_order(word) {
        let sub = word.subword_at(center, len);
        match out.iter_mut().find(|(p, _)| *p == sub) {
            Some((_, m)) => *m += 1,
            None => out.push((sub, 1)),
        }
    }
    out
}

/// Removes the first and last branches of an odd-length path, keeping the
/// center marked.
pub fn chop(path: &EdgePath) -> Result<EdgePath, TrackError> {
    let n = path.branches.len();
    if n < 3 || n % 2 == 0 {
        return Err(TrackError::ChopLength(n));
    }
    Ok(EdgePath {
        branches: path.branches[1..n - 1].to_vec(),
        center: path.center - 1,
    })
}
