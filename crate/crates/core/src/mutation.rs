//! Fault injection for formula coefficients.
//!
//! Every coefficient that appears in an implemented formula reads its value
//! through [`factor`]. Normally that is exactly `1.0`; inside
//! [`with_mutation`] the selected site is scaled by `1 + delta` on the
//! current thread only. The verification runner uses this to prove that each
//! identity suite is sensitive to the formula it certifies.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Default relative perturbation used by mutation checks.
pub const DEFAULT_DELTA: f64 = 1e-3;

macro_rules! sites {
    ($($variant:ident => $name:literal,)*) => {
        /// A perturbable formula coefficient.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(into = "String", try_from = "String")]
        pub enum Site {
            $($variant,)*
        }

        impl Site {
            pub const ALL: &'static [Site] = &[$(Site::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Site::$variant => $name,)*
                }
            }
        }

        impl FromStr for Site {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(Site::$variant),)*
                    other => Err(format!("unknown mutation site `{other}`")),
                }
            }
        }
    };
}

sites! {
    StructureConstant => "structure-constant",
    LoopDerivative => "loop-derivative",
    SpectralDerivative => "spectral-derivative",
    Cocycle => "cocycle",
    SemidirectLeft => "semidirect-left",
    SemidirectRight => "semidirect-right",
    PairingAlpha => "pairing-alpha",
    PairingCenter => "pairing-center",
    AdStarAlpha => "ad-star-alpha",
    AdStarTransport => "ad-star-transport",
    AdStarLevel => "ad-star-level",
    KappaLevel => "kappa-level",
    KappaQuadratic => "kappa-quadratic",
    GradKappa => "grad-kappa",
    MomentumLeftLevel => "momentum-left-level",
    MomentumRightSign => "momentum-right-sign",
    MomentumScalarLevel => "momentum-scalar-level",
    RightActionLevel => "right-action-level",
    PoissonCoadjoint => "poisson-coadjoint",
    PoissonTwist => "poisson-twist",
    TwistForm => "twist-form",
    LeftBaseLevel => "left-base-level",
    RightFiberGrad => "right-fiber-grad",
    ScalarFiberGrad => "scalar-fiber-grad",
    ScalarBaseTransport => "scalar-base-transport",
    ScalarBaseLevel => "scalar-base-level",
    FlowRightLevel => "flow-right-level",
    FlowCentralFiber => "flow-central-fiber",
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<Site> for String {
    fn from(s: Site) -> String {
        s.name().to_owned()
    }
}

impl TryFrom<String> for Site {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// An active perturbation: `site` is scaled by `1 + delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mutation {
    pub site: Site,
    pub delta: f64,
}

impl Mutation {
    pub fn new(site: Site) -> Self {
        Self { site, delta: DEFAULT_DELTA }
    }
}

thread_local! {
    static ACTIVE: Cell<Option<Mutation>> = const { Cell::new(None) };
}

/// Runs `f` with `mutation` active on this thread, restoring the previous
/// state afterwards (also on unwind).
pub fn with_mutation<R>(mutation: Option<Mutation>, f: impl FnOnce() -> R) -> R {
    struct Restore(Option<Mutation>);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let _restore = Restore(ACTIVE.with(|a| a.replace(mutation)));
    f()
}

/// The currently active mutation on this thread, if any.
pub fn active() -> Option<Mutation> {
    ACTIVE.with(|a| a.get())
}

/// Multiplier for the coefficient at `site`.
#[inline]
pub fn factor(site: Site) -> f64 {
    ACTIVE.with(|a| match a.get() {
        Some(m) if m.site == site => 1.0 + m.delta,
        _ => 1.0,
    })
}
