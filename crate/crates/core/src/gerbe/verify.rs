use serde::Serialize;

use crate::arith::ArithmeticModel;
use crate::error::{Error, Result};
use crate::gerbe::brauer::{BMFunctional, BrauerManin, Choices};
use crate::gerbe::{abelianize_gerbe, class_2cocycle, local::require_local_sections};
use crate::gerbe::GerbeExtension;
use crate::zmodule::QmodZ;

/// Comparison of `m_H` computed on `E` from splittings with `m_H` computed
/// on the pushout `E^ab` from solver trivializations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub direct: BMFunctional,
    pub abelianized: BMFunctional,
    pub holds: bool,
    /// `(generator, direct value, abelianized value)` where they differ
    pub diffs: Vec<(usize, QmodZ, QmodZ)>,
}

pub fn verify_factorization(ext: &GerbeExtension, model: &ArithmeticModel) -> Result<FactorizationReport> {
    let bm = BrauerManin::new(ext, model)?;
    let direct = bm.evaluate(&Choices::default())?;

    let push = abelianize_gerbe(ext)?;
    require_local_sections(&push.extension, model)?;
    let pushed = class_2cocycle(&push.extension)?;
    let e = push.transport(&pushed.cocycle, bm.class().module.clone())?;
    if !e.is_cocycle() {
        return Err(Error::NotACocycle(2));
    }
    let mut primitives = Vec::new();
    for (v, p) in model.places().iter().enumerate() {
        let local = bm.local_module(v).clone();
        let target = e.restrict_into(p.subgroup(), local.clone())?;
        let c = crate::cochain::CochainComplex::new(local)
            .solve_coboundary(&target)?
            .into_primitive()
            .ok_or_else(|| Error::NotLocallyNeutral(p.name().to_string()))?;
        primitives.push(c);
    }
    let empty = vec![Vec::new(); model.places().len()];
    let (abelianized, _) = bm.combine(&e, &primitives, &empty, &Choices::default())?;

    let diffs: Vec<(usize, QmodZ, QmodZ)> = direct
        .values
        .iter()
        .zip(&abelianized.values)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| (i, *a, *b))
        .collect();
    let holds = diffs.is_empty() && direct.domain == abelianized.domain;
    Ok(FactorizationReport { direct, abelianized, holds, diffs })
}
