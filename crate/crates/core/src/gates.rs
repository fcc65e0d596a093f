//! Frequency-threshold gates.
//!
//! Every gate is the same tube; only the rule that turns Δf into a bit
//! differs. OR fires at Δf ≥ 10 %, AND at Δf ≥ 24 %, XOR on the inclusive
//! band 4.9 % ≤ Δf ≤ 32 %. NOR, NAND and XNOR keep the thresholds and swap
//! the output categories.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::signal::{sample_delta_f, ResponseModel, StimulusPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Or,
    And,
    Not,
    Nor,
    Nand,
    Xor,
    Xnor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownGateKind(pub String);

impl fmt::Display for UnknownGateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown gate kind {:?}", self.0)
    }
}

impl std::error::Error for UnknownGateKind {}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::Or,
        GateKind::And,
        GateKind::Not,
        GateKind::Nor,
        GateKind::Nand,
        GateKind::Xor,
        GateKind::Xnor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Or => "OR",
            GateKind::And => "AND",
            GateKind::Not => "NOT",
            GateKind::Nor => "NOR",
            GateKind::Nand => "NAND",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
        }
    }

    pub fn arity(self) -> usize {
        if self == GateKind::Not {
            1
        } else {
            2
        }
    }

    /// The kind with the same thresholds and swapped output categories.
    /// NOT has no threshold-inverted partner in the gate set.
    pub fn complement(self) -> Option<GateKind> {
        match self {
            GateKind::Or => Some(GateKind::Nor),
            GateKind::Nor => Some(GateKind::Or),
            GateKind::And => Some(GateKind::Nand),
            GateKind::Nand => Some(GateKind::And),
            GateKind::Xor => Some(GateKind::Xnor),
            GateKind::Xnor => Some(GateKind::Xor),
            GateKind::Not => None,
        }
    }

    /// Ideal Boolean function. `b` is ignored for NOT.
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            GateKind::Or => a | b,
            GateKind::And => a & b,
            GateKind::Not => !a,
            GateKind::Nor => !(a | b),
            GateKind::Nand => !(a & b),
            GateKind::Xor => a ^ b,
            GateKind::Xnor => !(a ^ b),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = UnknownGateKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownGateKind(s.to_string()))
    }
}

/// Mapping from Δf (percent) to an output bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum ThresholdRule {
    /// Output is `high_when_above` iff Δf ≥ threshold.
    Single {
        threshold_pct: f64,
        high_when_above: bool,
    },
    /// Output is `one_inside` iff lo ≤ Δf ≤ hi.
    Band {
        lo_pct: f64,
        hi_pct: f64,
        one_inside: bool,
    },
}

impl ThresholdRule {
    pub const fn single(threshold_pct: f64, high_when_above: bool) -> Self {
        ThresholdRule::Single {
            threshold_pct,
            high_when_above,
        }
    }

    /// Panics unless `lo_pct < hi_pct`.
    pub fn band(lo_pct: f64, hi_pct: f64, one_inside: bool) -> Self {
        assert!(lo_pct < hi_pct, "band needs lo < hi, got [{lo_pct}, {hi_pct}]");
        ThresholdRule::Band {
            lo_pct,
            hi_pct,
            one_inside,
        }
    }

    /// Same cut points, opposite output for every Δf.
    pub fn complement(self) -> Self {
        match self {
            ThresholdRule::Single {
                threshold_pct,
                high_when_above,
            } => ThresholdRule::Single {
                threshold_pct,
                high_when_above: !high_when_above,
            },
            ThresholdRule::Band {
                lo_pct,
                hi_pct,
                one_inside,
            } => ThresholdRule::Band {
                lo_pct,
                hi_pct,
                one_inside: !one_inside,
            },
        }
    }
}

impl fmt::Display for ThresholdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ThresholdRule::Single {
                threshold_pct,
                high_when_above,
            } => write!(
                f,
                "Δf ≥ {threshold_pct}% → {}",
                u8::from(high_when_above)
            ),
            ThresholdRule::Band {
                lo_pct,
                hi_pct,
                one_inside,
            } => write!(f, "{lo_pct}% ≤ Δf ≤ {hi_pct}% → {}", u8::from(one_inside)),
        }
    }
}

pub const OR_THRESHOLD_PCT: f64 = 10.0;
pub const AND_THRESHOLD_PCT: f64 = 24.0;
pub const XOR_BAND_PCT: (f64, f64) = (4.9, 32.0);

/// Canonical rule for each gate kind.
pub fn threshold_rule_for(kind: GateKind) -> ThresholdRule {
    match kind {
        GateKind::Or => ThresholdRule::single(OR_THRESHOLD_PCT, true),
        GateKind::And => ThresholdRule::single(AND_THRESHOLD_PCT, true),
        GateKind::Xor => ThresholdRule::band(XOR_BAND_PCT.0, XOR_BAND_PCT.1, true),
        // Heat alone on channel A pushes Δf past 10 %, so reading "above" as 0
        // inverts A.
        GateKind::Not => ThresholdRule::single(OR_THRESHOLD_PCT, false),
        GateKind::Nor | GateKind::Nand | GateKind::Xnor => {
            threshold_rule_for(kind.complement().expect("binary kind")).complement()
        }
    }
}

/// Classifies a Δf value. Lower comparisons are `≥`, the band's upper edge
/// is inclusive.
pub fn classify(delta_f_pct: f64, rule: &ThresholdRule) -> bool {
    match *rule {
        ThresholdRule::Single {
            threshold_pct,
            high_when_above,
        } => (delta_f_pct >= threshold_pct) == high_when_above,
        ThresholdRule::Band {
            lo_pct,
            hi_pct,
            one_inside,
        } => (lo_pct <= delta_f_pct && delta_f_pct <= hi_pct) == one_inside,
    }
}

/// Stimuli applied for logic inputs `(a, b)`; an inverted input applies its
/// stimulus when the logic value is 0.
pub fn stimuli_for_inputs(a: bool, b: bool, invert_a: bool, invert_b: bool) -> StimulusPattern {
    StimulusPattern::new(a ^ invert_a, b ^ invert_b)
}

/// A single tube configured as a gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub kind: GateKind,
    pub invert_a: bool,
    pub invert_b: bool,
    /// Replaces the canonical rule for `kind` when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_override: Option<ThresholdRule>,
}

impl GateSpec {
    pub fn new(kind: GateKind) -> Self {
        Self {
            kind,
            invert_a: false,
            invert_b: false,
            rule_override: None,
        }
    }

    pub fn inverted(kind: GateKind, invert_a: bool, invert_b: bool) -> Self {
        Self {
            invert_a,
            invert_b: invert_b && kind.arity() == 2,
            ..Self::new(kind)
        }
    }

    pub fn with_rule(mut self, rule: ThresholdRule) -> Self {
        self.rule_override = Some(rule);
        self
    }

    pub fn rule(&self) -> ThresholdRule {
        self.rule_override
            .unwrap_or_else(|| threshold_rule_for(self.kind))
    }

    /// Stimulus pattern for logic inputs; NOT only drives channel A.
    pub fn stimulus(&self, a: bool, b: bool) -> StimulusPattern {
        if self.kind.arity() == 1 {
            stimuli_for_inputs(a, false, self.invert_a, false)
        } else {
            stimuli_for_inputs(a, b, self.invert_a, self.invert_b)
        }
    }

    /// Output of an error-free gate, inversions included.
    pub fn ideal(&self, a: bool, b: bool) -> bool {
        self.kind.apply(a ^ self.invert_a, b ^ self.invert_b)
    }
}

/// One tube: draws Δf for the induced stimulus and classifies it.
pub fn evaluate_gate<R: Rng + ?Sized>(
    spec: &GateSpec,
    a: bool,
    b: bool,
    model: &ResponseModel,
    rng: &mut R,
) -> bool {
    let delta_f = sample_delta_f(spec.stimulus(a, b), model, rng);
    classify(delta_f, &spec.rule())
}
