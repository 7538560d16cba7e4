//! Parsers for list-valued flags.

use txnet::sampling::SamplerMethod;

use crate::Failure;

/// `1,2,5` or `0..20` (end exclusive), mixed freely.
pub fn seeds(text: &str) -> Result<Vec<u64>, Failure> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let bad = || Failure::usage(format!("bad seed range `{part}`"));
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if b <= a {
                return Err(bad());
            }
            out.extend(a..b);
        } else {
            out.push(
                part.parse()
                    .map_err(|_| Failure::usage(format!("bad seed `{part}`")))?,
            );
        }
    }
    if out.is_empty() {
        return Err(Failure::usage("no seeds given"));
    }
    Ok(out)
}

/// `0.1,0.3` or `0:0.1:0.9` (inclusive), mixed freely.
pub fn p_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Failure::usage(format!("bad p value `{part}`"));
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [x] => out.push(x.trim().parse().map_err(|_| bad())?),
            [start, step, end] => {
                let start: f64 = start.trim().parse().map_err(|_| bad())?;
                let step: f64 = step.trim().parse().map_err(|_| bad())?;
                let end: f64 = end.trim().parse().map_err(|_| bad())?;
                if step.is_nan() || step <= 0.0 || end < start {
                    return Err(bad());
                }
                let count = ((end - start) / step + 1e-9).floor() as usize + 1;
                // Round off accumulated representation error so 0.1 * 3 prints as 0.3.
                out.extend((0..count).map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10));
            }
            _ => return Err(bad()),
        }
    }
    if out.is_empty() {
        return Err(Failure::usage("empty p grid"));
    }
    Ok(out)
}

pub fn methods(text: &str) -> Result<Vec<SamplerMethod>, Failure> {
    let out = text
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|m| m.parse::<SamplerMethod>().map_err(Failure::usage))
        .collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err(Failure::usage("no methods given"));
    }
    Ok(out)
}
