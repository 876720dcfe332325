//! Decision procedure for sign patterns whose graph is a cycle.
//!
//! Everything here works on a pattern relabeled into cycle form: nonzeros
//! only on the diagonal and at the cycle-adjacent positions `(i, i+1 mod n)`
//! ("forward") and `(i+1 mod n, i)` ("backward"). Edge `i` joins vertices
//! `i` and `i+1 mod n`.

use std::fmt;

use crate::determinantal::{is_sns, requires_singularity};
use crate::digraph::{
    backward_sign, cycle_form_labelings, forward_sign, monotone_n_cycles, require_cycle_form,
    CycleLabeling, Orientation,
};
use crate::error::{Error, Result};
use crate::pattern::{Sign, SignPattern};

fn fwd(a: &SignPattern, i: usize) -> Sign {
    a.get(i, (i + 1) % a.n())
}

fn bwd(a: &SignPattern, i: usize) -> Sign {
    a.get((i + 1) % a.n(), i)
}

/// Sign of the 2-cycle on edge `i`, `Zero` when the edge is one-directional.
fn edge_cycle(a: &SignPattern, i: usize) -> Sign {
    fwd(a, i) * bwd(a, i)
}

/// Edges incident to vertex `v`: `v - 1` and `v`.
fn incident_edges(n: usize, v: usize) -> [usize; 2] {
    [(v + n - 1) % n, v]
}

fn covered_by(a: &SignPattern, v: usize, s: Sign) -> bool {
    incident_edges(a.n(), v)
        .iter()
        .any(|&e| edge_cycle(a, e) == s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateRule {
    /// Some forward entry and some backward entry are both zero.
    ZeroForwardAndBackward,
    /// One edge has `fwd <= 0, bwd >= 0` and another `bwd <= 0, fwd >= 0`.
    OpposedEdges,
    /// No directed n-cycle of a single sign.
    NoMonotoneCycle,
    /// A vertex lies on a positive and on a negative 2-cycle.
    MixedTwoCycleVertex,
    /// A vertex on a negative 2-cycle carries a loop of the monotone cycle's sign.
    LoopOnNegativeTwoCycle,
    /// Only negative 2-cycles, one monotone cycle, no loop of its sign, and
    /// not SNS.
    NegativeCyclesNotSns,
    /// Monotone cycles in both directions at even order.
    OpposedMonotoneCyclesEven,
}

impl GateRule {
    pub fn code(self) -> &'static str {
        match self {
            GateRule::ZeroForwardAndBackward => "L3_1_1",
            GateRule::OpposedEdges => "L3_1_2",
            GateRule::NoMonotoneCycle => "L3_2",
            GateRule::MixedTwoCycleVertex => "L3_3",
            GateRule::LoopOnNegativeTwoCycle => "L3_4",
            GateRule::NegativeCyclesNotSns => "L3_12_1",
            GateRule::OpposedMonotoneCyclesEven => "L3_12_2",
        }
    }
}

/// A failed necessary condition. `detail` holds 1-based indices in the
/// cycle-form frame the gate was evaluated in: edge indices `(i, j)` for
/// the two edge gates (edge `i` joins `i` and `i+1`), a vertex otherwise,
/// and nothing for `NoMonotoneCycle`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateViolation {
    pub rule: GateRule,
    pub detail: Vec<usize>,
}

impl fmt::Display for GateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule.code())?;
        if !self.detail.is_empty() {
            let idx: Vec<String> = self.detail.iter().map(|d| d.to_string()).collect();
            write!(f, "({})", idx.join(","))?;
        }
        Ok(())
    }
}

/// All violated necessary conditions of a cycle-form pattern, at most one
/// record per rule, in rule order.
pub fn necessary_gates(a: &SignPattern) -> Result<Vec<GateViolation>> {
    require_cycle_form(a)?;
    let n = a.n();
    let mut out = Vec::new();

    let fz = (0..n).find(|&i| fwd(a, i).is_zero());
    let bz = (0..n).find(|&j| bwd(a, j).is_zero());
    if let (Some(i), Some(j)) = (fz, bz) {
        out.push(GateViolation {
            rule: GateRule::ZeroForwardAndBackward,
            detail: vec![i + 1, j + 1],
        });
    }

    let p = (0..n).find(|&i| fwd(a, i) != Sign::Plus && bwd(a, i) != Sign::Minus);
    let q = (0..n).find(|&j| bwd(a, j) != Sign::Plus && fwd(a, j) != Sign::Minus);
    if let (Some(i), Some(j)) = (p, q) {
        out.push(GateViolation {
            rule: GateRule::OpposedEdges,
            detail: vec![i + 1, j + 1],
        });
    }

    let cycles = monotone_n_cycles(a)?;
    if cycles.is_empty() {
        out.push(GateViolation {
            rule: GateRule::NoMonotoneCycle,
            detail: Vec::new(),
        });
    } else {
        if let Some(v) = (0..n).find(|&v| covered_by(a, v, Sign::Plus) && covered_by(a, v, Sign::Minus)) {
            out.push(GateViolation {
                rule: GateRule::MixedTwoCycleVertex,
                detail: vec![v + 1],
            });
        }
        let hit = (0..n).find(|&v| {
            covered_by(a, v, Sign::Minus) && cycles.iter().any(|c| a.get(v, v) == c.sign)
        });
        if let Some(v) = hit {
            out.push(GateViolation {
                rule: GateRule::LoopOnNegativeTwoCycle,
                detail: vec![v + 1],
            });
        }

        let only_negative = (0..n).all(|e| edge_cycle(a, e) != Sign::Plus)
            && (0..n).any(|e| edge_cycle(a, e) == Sign::Minus);
        if only_negative && cycles.len() == 1 {
            let s = cycles.iter().next().expect("one cycle").sign;
            let loops_opposite = (0..n).all(|v| a.get(v, v) != s);
            if loops_opposite && !is_sns(a)?.is_sns {
                out.push(GateViolation {
                    rule: GateRule::NegativeCyclesNotSns,
                    detail: Vec::new(),
                });
            }
        }
        let both = cycles.iter().any(|c| c.orientation == Orientation::Forward)
            && cycles.iter().any(|c| c.orientation == Orientation::Backward);
        if both && n % 2 == 0 && only_negative {
            out.push(GateViolation {
                rule: GateRule::OpposedMonotoneCyclesEven,
                detail: Vec::new(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    TypeI,
    TypeII,
}

/// Contiguous vertex interval `start..=end` (0-based, cycle-form order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub kind: BlockKind,
}

impl Block {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> Vec<usize> {
        (self.start..=self.end).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

/// Split a pattern with `a_{1n} = 0` and all forward entries `+` into
/// maximal runs joined by backward entries of one sign. A run of `-`
/// edges is Type-I, a run of `+` edges Type-II; a zero or a sign change
/// ends the run, and the next block starts at the following vertex.
/// Single vertices are recorded as Type-II.
pub fn decompose_blocks(a: &SignPattern) -> Result<BlockDecomposition> {
    require_cycle_form(a)?;
    let n = a.n();
    if a.get(0, n - 1).is_nonzero() || (0..n).any(|i| fwd(a, i) != Sign::Plus) {
        return Err(Error::Precondition(
            "block decomposition needs a_1n = 0 and every forward entry +".into(),
        ));
    }
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < n {
        let run_sign = if start + 1 < n { bwd(a, start) } else { Sign::Zero };
        let mut end = start;
        if run_sign.is_nonzero() {
            while end + 1 < n && bwd(a, end) == run_sign {
                end += 1;
            }
        }
        let kind = if run_sign == Sign::Minus {
            BlockKind::TypeI
        } else {
            BlockKind::TypeII
        };
        blocks.push(Block { start, end, kind });
        start = end + 1;
    }
    Ok(BlockDecomposition { blocks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Irreducible, all nonzero off-diagonal entries of one sign; used for
    /// patterns with positive 2-cycles only and loops.
    UniformSign,
    /// Zero diagonal.
    LooplessCycle,
    /// Negative 2-cycles only: off-diagonal entries of one sign.
    NegativeCyclesUniform,
    /// Negative 2-cycles only: SNS with `-0` loops.
    NegativeCyclesSns,
    /// Negative 2-cycles only: a strict `+` loop off the negative 2-cycles.
    NegativeCyclesPositiveLoop,
    /// Both 2-cycle signs.
    MixedCycles,
    /// Both 2-cycle signs; every shift by the largest `+` loop lands in
    /// [`Rule::MixedCycles`].
    MixedCyclesShifted,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::UniformSign => "L3_9",
            Rule::LooplessCycle => "T3_10",
            Rule::NegativeCyclesUniform => "T3_15_c1",
            Rule::NegativeCyclesSns => "T3_15_c2",
            Rule::NegativeCyclesPositiveLoop => "T3_15_c3",
            Rule::MixedCycles => "T3_18",
            Rule::MixedCyclesShifted => "T3_18_shift",
        }
    }
}

/// A sufficient-condition theorem whose conditions all fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailedCondition {
    UniformSign,
    NegativeCycles,
    MixedCyclesCorner,
    MixedCyclesBlocks,
}

impl FailedCondition {
    pub fn code(self) -> &'static str {
        match self {
            FailedCondition::UniformSign => "L3_9",
            FailedCondition::NegativeCycles => "T3_15",
            FailedCondition::MixedCyclesCorner => "T3_18_c1",
            FailedCondition::MixedCyclesBlocks => "T3_18_c2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Gate(GateViolation),
    Condition(FailedCondition),
}

/// What made a mixed-2-cycle pattern qualify (1-based, verdict frame).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    None,
    PositivePair(usize, usize),
    SingularTypeI(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Requires(Rule),
    NotRequires(Failure),
    NotCycle,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    /// Verdict assembled from the uniform-sign lemma and the gates rather
    /// than a single theorem.
    pub derived_rule: bool,
    /// The literal text of the positive-loop condition, the reading used
    /// here, and the corollary it rests on do not all agree.
    pub condition3_ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub labeling: Option<CycleLabeling>,
    pub negated: bool,
    pub evidence: Evidence,
    pub flags: Flags,
}

impl Verdict {
    fn not_cycle() -> Verdict {
        Verdict {
            outcome: Outcome::NotCycle,
            labeling: None,
            negated: false,
            evidence: Evidence::None,
            flags: Flags::default(),
        }
    }

    pub fn is_requires(&self) -> bool {
        matches!(self.outcome, Outcome::Requires(_))
    }

    pub fn is_not_requires(&self) -> bool {
        matches!(self.outcome, Outcome::NotRequires(_))
    }

    pub fn verdict_str(&self) -> &'static str {
        match self.outcome {
            Outcome::Requires(_) => "Requires",
            Outcome::NotRequires(_) => "NotRequires",
            Outcome::NotCycle => "NotCycle",
        }
    }

    /// The rule or failed-condition code, with flags appended after `;`.
    pub fn rule_str(&self) -> String {
        let mut s = match &self.outcome {
            Outcome::Requires(r) => r.code().to_string(),
            Outcome::NotRequires(Failure::Condition(c)) => c.code().to_string(),
            _ => String::new(),
        };
        if self.flags.derived_rule {
            s.push_str(";derived_rule");
        }
        if self.flags.condition3_ambiguous {
            s.push_str(";condition3_ambiguous");
        }
        s
    }

    pub fn gate_str(&self) -> String {
        match &self.outcome {
            Outcome::NotRequires(Failure::Gate(g)) => g.to_string(),
            _ => String::new(),
        }
    }

    /// The cycle-form pattern the verdict was reached in.
    pub fn frame(&self, a: &SignPattern) -> Option<SignPattern> {
        let lab = self.labeling.as_ref()?;
        let f = lab.apply(a);
        Some(if self.negated { f.negate() } else { f })
    }
}

struct Frame {
    labeling: CycleLabeling,
    negated: bool,
    a: SignPattern,
}

fn frames(a: &SignPattern, labelings: &[CycleLabeling]) -> Vec<Frame> {
    let mut out = Vec::with_capacity(2 * labelings.len());
    for lab in labelings {
        let f = lab.apply(a);
        out.push(Frame {
            labeling: lab.clone(),
            negated: true,
            a: f.negate(),
        });
        out.push(Frame {
            labeling: lab.clone(),
            negated: false,
            a: f,
        });
    }
    // Lexicographically smallest labeling first, unnegated before negated.
    out.sort_by(|x, y| (&x.labeling, x.negated).cmp(&(&y.labeling, y.negated)));
    out
}

fn off_diagonal_all_plus(a: &SignPattern) -> bool {
    let n = a.n();
    (0..n).all(|i| (0..n).all(|j| i == j || a.get(i, j) != Sign::Minus))
}

fn loop_in(a: &SignPattern, v: usize, allowed: &[Sign]) -> bool {
    allowed.contains(&a.get(v, v))
}

/// Forward cycle positive and no negative n-cycle.
fn positive_cycle_only(a: &SignPattern) -> bool {
    forward_sign(a) == Some(Sign::Plus) && backward_sign(a) != Some(Sign::Minus)
}

const NONPOS: [Sign; 2] = [Sign::Minus, Sign::Zero];
const NONNEG: [Sign; 2] = [Sign::Plus, Sign::Zero];

fn positive_loop_reading(a: &SignPattern) -> bool {
    let n = a.n();
    let mut strict = false;
    for v in 0..n {
        if covered_by(a, v, Sign::Minus) {
            if !loop_in(a, v, &NONPOS) {
                return false;
            }
        } else {
            if !loop_in(a, v, &NONNEG) {
                return false;
            }
            strict |= a.get(v, v) == Sign::Plus;
        }
    }
    strict
}

fn positive_loop_literal(a: &SignPattern) -> bool {
    (0..a.n()).all(|v| covered_by(a, v, Sign::Minus) || loop_in(a, v, &NONNEG))
}

fn positive_loop_corollary(a: &SignPattern) -> bool {
    let n = a.n();
    (0..n).all(|v| !covered_by(a, v, Sign::Minus) || loop_in(a, v, &NONPOS))
        && (0..n).any(|v| a.get(v, v) == Sign::Plus)
}

fn requires(rule: Rule, f: &Frame, evidence: Evidence, flags: Flags) -> Verdict {
    Verdict {
        outcome: Outcome::Requires(rule),
        labeling: Some(f.labeling.clone()),
        negated: f.negated,
        evidence,
        flags,
    }
}

fn not_requires(failure: Failure, f: &Frame, flags: Flags) -> Verdict {
    Verdict {
        outcome: Outcome::NotRequires(failure),
        labeling: Some(f.labeling.clone()),
        negated: f.negated,
        evidence: Evidence::None,
        flags,
    }
}

/// Decide whether every matrix with pattern `a` is algebraically positive.
///
/// Patterns whose graph `G(A)` is not a cycle of length at least 3 give
/// `NotCycle`.
pub fn classify(a: &SignPattern) -> Verdict {
    let labelings = cycle_form_labelings(a);
    if labelings.is_empty() {
        return Verdict::not_cycle();
    }
    let frames = frames(a, &labelings);
    let base = &frames[0];

    // Gates are invariant under relabeling and negation; evaluating every
    // frame keeps that an observed fact rather than an assumption.
    let mut first_violation = None;
    let mut all_fail = true;
    for f in &frames {
        let g = necessary_gates(&f.a).expect("frames are in cycle form");
        if g.is_empty() {
            all_fail = false;
        } else if first_violation.is_none() {
            first_violation = Some((g[0].clone(), f));
        }
    }
    if all_fail {
        let (g, f) = first_violation.expect("some frame failed");
        return not_requires(Failure::Gate(g), f, Flags::default());
    }

    let b = &base.a;
    let n = b.n();
    let two: Vec<Sign> = (0..n).map(|e| edge_cycle(b, e)).collect();
    let has_pos = two.contains(&Sign::Plus);
    let has_neg = two.contains(&Sign::Minus);

    if b.has_zero_diagonal() {
        let f = frames
            .iter()
            .find(|f| forward_sign(&f.a) == Some(Sign::Plus))
            .unwrap_or(base);
        return requires(Rule::LooplessCycle, f, Evidence::None, Flags::default());
    }

    if has_pos && has_neg {
        return classify_mixed(&frames);
    }

    if !has_pos {
        return classify_negative(a, &frames);
    }

    let flags = Flags {
        derived_rule: true,
        ..Flags::default()
    };
    match frames.iter().find(|f| off_diagonal_all_plus(&f.a)) {
        Some(f) => requires(Rule::UniformSign, f, Evidence::None, flags),
        None => not_requires(Failure::Condition(FailedCondition::UniformSign), base, flags),
    }
}

fn classify_mixed(frames: &[Frame]) -> Verdict {
    let normal: Vec<&Frame> = frames
        .iter()
        .filter(|f| {
            let n = f.a.n();
            forward_sign(&f.a) == Some(Sign::Plus) && f.a.get(0, n - 1).is_zero()
        })
        .collect();
    let Some(&first) = normal.first() else {
        return not_requires(
            Failure::Condition(FailedCondition::MixedCyclesCorner),
            &frames[0],
            Flags::default(),
        );
    };
    for f in &normal {
        if let Some(ev) = mixed_block_evidence(&f.a) {
            return requires(Rule::MixedCycles, f, ev, Flags::default());
        }
    }
    for f in &normal {
        if shifted_requires(&f.a) {
            let flags = Flags {
                derived_rule: true,
                ..Flags::default()
            };
            return requires(Rule::MixedCyclesShifted, f, Evidence::None, flags);
        }
    }
    not_requires(
        Failure::Condition(FailedCondition::MixedCyclesBlocks),
        first,
        Flags::default(),
    )
}

const SHIFT_LOOP_BOUND: usize = 8;

/// For `B` in `Q(A)` let `k` maximize `b_kk` over the `+` loops. Then
/// `B - b_kk I` has a zero loop at `k`, `-` or `0` at the other `+` loops and
/// `-` everywhere else on the diagonal. When every such pattern requires
/// algebraic positivity, so does `A`, since a shift preserves it.
fn shifted_requires(a: &SignPattern) -> bool {
    let n = a.n();
    let plus: Vec<usize> = (0..n).filter(|&v| a.get(v, v) == Sign::Plus).collect();
    if plus.is_empty() || plus.len() > SHIFT_LOOP_BOUND {
        return false;
    }
    for &k in &plus {
        let others: Vec<usize> = plus.iter().copied().filter(|&v| v != k).collect();
        for mask in 0u32..1 << others.len() {
            let mut b = a.clone();
            for v in 0..n {
                if b.get(v, v) != Sign::Plus {
                    b.set(v, v, Sign::Minus);
                }
            }
            b.set(k, k, Sign::Zero);
            for (t, &v) in others.iter().enumerate() {
                b.set(v, v, if mask >> t & 1 == 1 { Sign::Zero } else { Sign::Minus });
            }
            if !classify(&b).is_requires() {
                return false;
            }
        }
    }
    true
}

/// The second condition for mixed 2-cycles, on a frame with forward
/// entries `+` and `a_{1n} = 0`.
fn mixed_block_evidence(a: &SignPattern) -> Option<Evidence> {
    let n = a.n();
    for i in 0..n - 1 {
        let j = i + 1;
        if a.get(i, j) == Sign::Plus
            && a.get(j, i) == Sign::Plus
            && (loop_in(a, i, &NONNEG) || loop_in(a, j, &NONNEG))
        {
            return Some(Evidence::PositivePair(i + 1, j + 1));
        }
    }
    let blocks = decompose_blocks(a).ok()?;
    for blk in &blocks.blocks {
        let singular = match (blk.kind, blk.len()) {
            (BlockKind::TypeI, _) => {
                let sub = a.principal(&blk.indices()).ok()?;
                requires_singularity(&sub).unwrap_or(false)
            }
            // An isolated vertex with a zero loop is an order-1 Type-I
            // block that requires singularity.
            (BlockKind::TypeII, 1) => a.get(blk.start, blk.start).is_zero(),
            _ => false,
        };
        if singular {
            return Some(Evidence::SingularTypeI(blk.start + 1, blk.end + 1));
        }
    }
    None
}

fn classify_negative(a: &SignPattern, frames: &[Frame]) -> Verdict {
    let sns = is_sns(a).map(|r| r.is_sns).unwrap_or(false);
    let c1 = frames.iter().find(|f| off_diagonal_all_plus(&f.a));
    let c2 = frames.iter().find(|f| {
        positive_cycle_only(&f.a) && sns && (0..f.a.n()).all(|v| loop_in(&f.a, v, &NONPOS))
    });
    let c3 = frames
        .iter()
        .find(|f| positive_cycle_only(&f.a) && positive_loop_reading(&f.a));
    let lit = frames
        .iter()
        .any(|f| positive_cycle_only(&f.a) && positive_loop_literal(&f.a));
    let cor = frames
        .iter()
        .any(|f| positive_cycle_only(&f.a) && positive_loop_corollary(&f.a));

    let base_ok = c1.is_some() || c2.is_some();
    let reading = base_ok || c3.is_some();
    let flags = Flags {
        derived_rule: false,
        condition3_ambiguous: reading != (base_ok || lit) || reading != (base_ok || cor),
    };
    if let Some(f) = c1 {
        requires(Rule::NegativeCyclesUniform, f, Evidence::None, flags)
    } else if let Some(f) = c2 {
        requires(Rule::NegativeCyclesSns, f, Evidence::None, flags)
    } else if let Some(f) = c3 {
        requires(Rule::NegativeCyclesPositiveLoop, f, Evidence::None, flags)
    } else {
        not_requires(
            Failure::Condition(FailedCondition::NegativeCycles),
            &frames[0],
            flags,
        )
    }
}
