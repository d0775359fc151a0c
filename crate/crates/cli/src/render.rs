use hfcode::code::{Dyadic, Enclosure};
use serde::Serialize;

use crate::Failure;

/// Exact dyadic endpoints of an enclosure.
#[derive(Serialize)]
pub struct ExactBounds<'a> {
    pub lo: &'a Dyadic,
    pub hi: &'a Dyadic,
}

/// An enclosure as outward-rounded decimals plus its exact endpoints.
#[derive(Serialize)]
pub struct EnclosureJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<&'a str>,
    pub lo: String,
    pub hi: String,
    pub width: String,
    pub exact: ExactBounds<'a>,
}

impl<'a> EnclosureJson<'a> {
    pub fn new(name: Option<&'a str>, e: &'a Enclosure, digits: usize) -> EnclosureJson<'a> {
        let (lo, hi) = e.to_decimal(digits);
        EnclosureJson {
            name,
            lo,
            hi,
            width: sci(&e.width()),
            exact: ExactBounds {
                lo: e.lo(),
                hi: e.hi(),
            },
        }
    }
}

/// Short scientific rendering for widths and gaps.
pub fn sci(d: &Dyadic) -> String {
    if d.is_zero() {
        "0".to_string()
    } else {
        format!("{:.3e}", d.to_f64())
    }
}

pub fn interval(e: &Enclosure, digits: usize) -> String {
    let (lo, hi) = e.to_decimal(digits);
    format!("[{lo}, {hi}]")
}

pub fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    println!("{text}");
    Ok(())
}
