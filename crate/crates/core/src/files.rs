//! JSON file formats for carriers, families, braces, solutions, and
//! representation bundles. All forms are canonical nested arrays,
//! whitespace-insensitive on input.

use crate::braces::SkewBrace;
use crate::carrier::{Carrier, ParamFamily, ParamSubset};
use crate::coalgebra::BulletOp;
use crate::error::{Error, Result};
use crate::shelves::PShelf;
use crate::solutions::ParamYBMap;
use crate::tensor::RepBundle;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// `{"n", "labels"?, "Y", "family": [zi][zj][a][x]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
    pub family: Vec<Vec<Vec<Vec<usize>>>>,
}

impl FamilyFile {
    pub fn from_family(carrier: &Carrier, fam: &ParamFamily) -> Self {
        FamilyFile {
            n: fam.n,
            labels: carrier.labels.clone(),
            y: fam.params.indices.clone(),
            family: fam.to_nested(),
        }
    }

    pub fn into_family(self) -> Result<(Carrier, ParamFamily)> {
        let carrier = match self.labels {
            Some(l) => {
                if l.len() != self.n {
                    return Err(Error::Invalid("labels length must equal n".into()));
                }
                Carrier::with_labels(l)?
            }
            None => Carrier::new(self.n)?,
        };
        let params = ParamSubset::new(self.y, self.n)?;
        let fam = ParamFamily::from_nested(self.n, params, &self.family)?;
        Ok((carrier, fam))
    }
}

/// `{"n", "labels"?, "add": [[..]], "mul": [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BraceFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl BraceFile {
    pub fn from_brace(b: &SkewBrace) -> Self {
        let n = b.n();
        let (add, mul) = b.tables();
        let rows = |t: &[usize]| -> Vec<Vec<usize>> {
            (0..n).map(|r| t[r * n..(r + 1) * n].to_vec()).collect()
        };
        BraceFile {
            n,
            labels: b.carrier.labels.clone(),
            add: rows(add),
            mul: rows(mul),
        }
    }

    pub fn into_brace(self) -> Result<SkewBrace> {
        let carrier = match self.labels {
            Some(l) => Carrier::with_labels(l)?,
            None => Carrier::new(self.n)?,
        };
        let flat = |rows: Vec<Vec<usize>>, name: &str| -> Result<Vec<usize>> {
            if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                return Err(Error::Invalid(format!("{name} table must be n x n")));
            }
            Ok(rows.into_iter().flatten().collect())
        };
        SkewBrace::new(carrier, flat(self.add, "add")?, flat(self.mul, "mul")?)
    }
}

/// `{"n", "labels"?, "Y", "sigma": nested, "tau": nested}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
    pub sigma: Vec<Vec<Vec<Vec<usize>>>>,
    pub tau: Vec<Vec<Vec<Vec<usize>>>>,
}

impl SolutionFile {
    pub fn from_solution(carrier: &Carrier, r: &ParamYBMap) -> Self {
        SolutionFile {
            n: r.n(),
            labels: carrier.labels.clone(),
            y: r.sigma.params.indices.clone(),
            sigma: r.sigma.to_nested(),
            tau: r.tau.to_nested(),
        }
    }

    pub fn into_solution(self) -> Result<(Carrier, ParamYBMap)> {
        let carrier = match self.labels {
            Some(l) => Carrier::with_labels(l)?,
            None => Carrier::new(self.n)?,
        };
        let params = ParamSubset::new(self.y, self.n)?;
        let sigma = ParamFamily::from_nested(self.n, params.clone(), &self.sigma)?;
        let tau = ParamFamily::from_nested(self.n, params, &self.tau)?;
        Ok((carrier, ParamYBMap::new(sigma, tau)?))
    }
}

/// `{"n", "labels"?, "Y", "shelf": nested, "sigma"?: nested,
/// "bullet"?: nested, "group"?: [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
    pub shelf: Vec<Vec<Vec<Vec<usize>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<Vec<Vec<usize>>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bullet: Option<Vec<Vec<Vec<Vec<usize>>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<Vec<usize>>>,
}

impl BundleFile {
    pub fn from_bundle(bundle: &RepBundle, bullet: Option<&BulletOp>) -> Self {
        BundleFile {
            n: bundle.n(),
            labels: bundle.carrier.labels.clone(),
            y: bundle.shelf.op.params.indices.clone(),
            shelf: bundle.shelf.op.to_nested(),
            sigma: bundle.sigma.as_ref().map(|s| s.to_nested()),
            bullet: bullet
                .map(|b| b.fam.to_nested())
                .or_else(|| bundle.bullet.as_ref().map(|b| b.to_nested())),
            group: bundle.group.as_ref().map(|g| {
                (0..bundle.n())
                    .map(|r| g[r * bundle.n()..(r + 1) * bundle.n()].to_vec())
                    .collect()
            }),
        }
    }

    pub fn into_bundle(self) -> Result<(RepBundle, Option<BulletOp>)> {
        let carrier = match self.labels {
            Some(l) => Carrier::with_labels(l)?,
            None => Carrier::new(self.n)?,
        };
        let params = ParamSubset::new(self.y, self.n)?;
        let shelf_fam = ParamFamily::from_nested(self.n, params.clone(), &self.shelf)?;
        let shelf = PShelf::new(shelf_fam)?;
        let sigma = self
            .sigma
            .map(|s| ParamFamily::from_nested(self.n, params.clone(), &s))
            .transpose()?;
        let mut bundle = RepBundle::fundamental_rep(shelf, sigma)?.with_carrier(carrier);
        let bullet = self
            .bullet
            .map(|b| -> Result<BulletOp> {
                let fam = ParamFamily::from_nested(self.n, params.clone(), &b)?;
                BulletOp::new(fam)
            })
            .transpose()?;
        if let Some(b) = &bullet {
            bundle = bundle.with_bullet(b.fam.clone());
        }
        if let Some(rows) = self.group {
            if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                return Err(Error::Invalid("group table must be n x n".into()));
            }
            bundle = bundle.with_group(rows.into_iter().flatten().collect());
        }
        Ok((bundle, bullet))
    }
}

/// Read a JSON value of any file type, reporting the parse position on
/// malformed input.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Invalid(format!(
            "{}: malformed JSON at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braces::{brace_shelf, brace_sigma_tau, cyclic_brace};

    #[test]
    fn family_file_roundtrip() {
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let xi = br.carrier.index_of(3).unwrap();
        let shelf = brace_shelf(&br, &y, xi).unwrap();
        let file = FamilyFile::from_family(&br.carrier, &shelf.op);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: FamilyFile = serde_json::from_str(&text).unwrap();
        let (carrier, fam) = parsed.into_family().unwrap();
        assert_eq!(carrier, br.carrier);
        assert_eq!(fam, shelf.op);
    }

    #[test]
    fn brace_file_roundtrip() {
        let br = cyclic_brace(3).unwrap();
        let file = BraceFile::from_brace(&br);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: BraceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.into_brace().unwrap(), br);
    }

    #[test]
    fn solution_file_roundtrip() {
        let br = cyclic_brace(2).unwrap();
        let y = ParamSubset::full(br.n());
        let (sigma, tau) = brace_sigma_tau(&br, &y, 0).unwrap();
        let r = ParamYBMap { sigma, tau };
        let file = SolutionFile::from_solution(&br.carrier, &r);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: SolutionFile = serde_json::from_str(&text).unwrap();
        let (_, r2) = parsed.into_solution().unwrap();
        assert_eq!(r2, r);
    }

    #[test]
    fn bundle_file_roundtrip() {
        let br = cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let xi = br.carrier.index_of(3).unwrap();
        let shelf = brace_shelf(&br, &y, xi).unwrap();
        let (sigma, _) = brace_sigma_tau(&br, &y, xi).unwrap();
        let bundle = RepBundle::fundamental_rep(shelf, Some(sigma))
            .unwrap()
            .with_carrier(br.carrier.clone())
            .with_group(br.tables().1.to_vec());
        let file = BundleFile::from_bundle(&bundle, None);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: BundleFile = serde_json::from_str(&text).unwrap();
        let (b2, bullet) = parsed.into_bundle().unwrap();
        assert!(bullet.is_none());
        assert_eq!(b2.shelf, bundle.shelf);
        assert_eq!(b2.sigma, bundle.sigma);
        assert_eq!(b2.group, bundle.group);
    }

    #[test]
    fn malformed_json_reports_position() {
        let dir = std::env::temp_dir().join("parayb-test-files");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.json");
        std::fs::write(&path, "{\"n\": 2,\n  broken").unwrap();
        let err = read_json::<FamilyFile>(&path).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line 2"), "{msg}");
    }
}
