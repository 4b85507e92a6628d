//! Sweep specifications: `lo:hi:count[,log|,lin]` ranges or explicit comma lists.

use anyhow::{bail, Context, Result};
use spectrakit::spacing::{lin_spaced, log_spaced};

pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.contains(':') {
        let (range, scale) = match text.split_once(',') {
            Some((range, scale)) => (range, scale.trim()),
            None => (text, "log"),
        };
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            bail!("range {text:?} must look like lo:hi:count[,log|,lin]");
        };
        let lo: f64 = lo.trim().parse().with_context(|| format!("bad range start in {text:?}"))?;
        let hi: f64 = hi.trim().parse().with_context(|| format!("bad range end in {text:?}"))?;
        let count: usize = count.trim().parse().with_context(|| format!("bad point count in {text:?}"))?;
        if count == 0 {
            bail!("range {text:?} has no points");
        }
        if !(lo.is_finite() && hi.is_finite()) || hi < lo {
            bail!("range {text:?} must have finite lo <= hi");
        }
        match scale {
            "log" => {
                if lo <= 0.0 {
                    bail!("log range {text:?} needs a positive start");
                }
                Ok(log_spaced(lo, hi, count))
            }
            "lin" => Ok(lin_spaced(lo, hi, count)),
            other => bail!("unknown range scale {other:?} (use log or lin)"),
        }
    } else {
        text.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .with_context(|| format!("cannot parse {v:?} as a number"))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        let v = parse_sweep("1e-6:1e2:200,log").unwrap();
        assert_eq!(v.len(), 200);
        assert_eq!((v[0], v[199]), (1e-6, 1e2));
        assert_eq!(parse_sweep("0:1:3,lin").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_sweep("1:100:3").unwrap().len(), 3);
        assert_eq!(parse_sweep("0.654").unwrap(), vec![0.654]);
        assert_eq!(parse_sweep("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn malformed() {
        for bad in ["1:2", "0:1:5,log", "1:2:0", "2:1:3", "1:2:3,cubic", "a,b", ""] {
            assert!(parse_sweep(bad).is_err(), "{bad}");
        }
    }
}
