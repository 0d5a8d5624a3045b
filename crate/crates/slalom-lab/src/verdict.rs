//! Three-valued verdicts for tail statements evaluated at a finite horizon.
//!
//! Statements quantified by "for all but finitely many n" or "there are
//! infinitely many n" cannot be decided by inspecting a window. The crate's
//! convention, applied uniformly:
//!
//! - `Holds` is only issued on the strength of a certificate that was
//!   spot-validated by exact checks inside the window;
//! - `Fails` carries a concrete finite counterexample (typically an exact
//!   inequality with both sides attached);
//! - everything else is `Unknown`, whose payload records what the window scan
//!   actually observed — "consistent up to the horizon" lives here, never in
//!   `Holds`.

/// Outcome of a semi-decision at a finite horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict3<H, F, U = Horizon> {
    /// Certified positive answer; payload references the validated certificate.
    Holds(H),
    /// Concrete finite counterexample.
    Fails(F),
    /// Not resolved within the window.
    Unknown(U),
}

/// Default `Unknown` payload: how far the scan looked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizon(pub usize);

impl<H, F, U> Verdict3<H, F, U> {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict3::Holds(_))
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict3::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict3::Unknown(_))
    }

    /// Short tag for reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict3::Holds(_) => "holds",
            Verdict3::Fails(_) => "fails",
            Verdict3::Unknown(_) => "unknown",
        }
    }
}
