use num_bigint::BigInt;

use super::{Domain, Instance};
use crate::error::Result;
use crate::poly::Polynomial;
use crate::tableaux::ShiftParams;

/// `F_{λ,N}[n]` (or its shifted version `F^l`) collected from `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterGF {
    pub value: Polynomial,
    pub instance: Instance,
    pub l: u32,
}

/// Signed weight sum over an exhaustively enumerated domain.
pub fn signed_sum(domain: &Domain, shift: ShiftParams, cap: u64) -> Result<Polynomial> {
    let mut out = Polynomial::zero(shift.n());
    for x in domain.enumerate(cap)? {
        out.add_term(x.weight(shift), BigInt::from(x.sign()));
    }
    Ok(out)
}

pub fn master_gf(inst: &Instance, l: u32, cap: u64) -> Result<MasterGF> {
    let shift = ShiftParams::new(inst.n, l)?;
    Ok(MasterGF {
        value: signed_sum(&inst.s_domain(), shift, cap)?,
        instance: inst.clone(),
        l,
    })
}
