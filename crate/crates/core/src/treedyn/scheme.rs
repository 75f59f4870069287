//! Mapping schemes: a finite set with a self-map Φ and local degrees δ.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("degree-1 vertex {0:?} is not a forward image of any critical vertex")]
    MinimalityViolated(String),
    #[error("periodic cycle {0:?} has no vertex of degree at least 2")]
    HyperbolicityViolated(Vec<String>),
    #[error("scheme has no vertices")]
    Empty,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex {0:?} is listed twice")]
    DuplicateVertex(String),
    #[error("vertex {0:?} lacks {1}")]
    MissingField(String, &'static str),
    #[error("vertex {0:?} has degree 0")]
    ZeroDegree(String),
}

/// Vertices are indexed `0..n` and carry display names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingScheme {
    names: Vec<String>,
    phi: Vec<usize>,
    delta: Vec<u32>,
}

impl MappingScheme {
    /// Builds and validates a scheme.
    pub fn new(names: Vec<String>, phi: Vec<usize>, delta: Vec<u32>) -> Result<Self, SchemeError> {
        let s = Self::unchecked(names, phi, delta)?;
        s.validate()?;
        Ok(s)
    }

    /// Structural checks only; minimality and hyperbolicity are left to [`validate`](Self::validate).
    pub fn unchecked(names: Vec<String>, phi: Vec<usize>, delta: Vec<u32>) -> Result<Self, SchemeError> {
        if names.is_empty() {
            return Err(SchemeError::Empty);
        }
        let n = names.len();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(SchemeError::DuplicateVertex(name.clone()));
            }
        }
        if phi.len() != n {
            return Err(SchemeError::MissingField(names[phi.len().min(n - 1)].clone(), "phi"));
        }
        if delta.len() != n {
            return Err(SchemeError::MissingField(names[delta.len().min(n - 1)].clone(), "delta"));
        }
        if let Some(&bad) = phi.iter().find(|&&t| t >= n) {
            return Err(SchemeError::UnknownVertex(bad.to_string()));
        }
        if let Some(i) = delta.iter().position(|&d| d == 0) {
            return Err(SchemeError::ZeroDegree(names[i].clone()));
        }
        Ok(MappingScheme { names, phi, delta })
    }

    /// The QH_d-type scheme: two fixed vertices of degree `d`.
    pub fn two_fixed(d: u32) -> Self {
        Self::new(vec!["0".into(), "1".into()], vec![0, 1], vec![d, d]).expect("valid")
    }

    /// One fixed vertex of degree `d` (the power map `z^d`).
    pub fn single(d: u32) -> Self {
        Self::new(vec!["0".into()], vec![0], vec![d]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn phi(&self, s: usize) -> usize {
        self.phi[s]
    }

    pub fn delta(&self, s: usize) -> u32 {
        self.delta[s]
    }

    /// `Φ^k(s)`.
    pub fn phi_iter(&self, mut s: usize, k: usize) -> usize {
        for _ in 0..k {
            s = self.phi[s];
        }
        s
    }

    pub fn is_periodic(&self, s: usize) -> bool {
        let mut t = self.phi[s];
        for _ in 0..self.len() {
            if t == s {
                return true;
            }
            t = self.phi[t];
        }
        false
    }

    /// `1 + Σ (δ(s) − 1)`.
    pub fn degree(&self) -> u32 {
        1 + self.delta.iter().map(|d| d - 1).sum::<u32>()
    }

    /// Checks hyperbolicity, then minimality; returns the scheme degree.
    pub fn validate(&self) -> Result<u32, SchemeError> {
        let n = self.len();
        for s in 0..n {
            if !self.is_periodic(s) {
                continue;
            }
            let mut cycle = vec![s];
            let mut t = self.phi[s];
            while t != s {
                cycle.push(t);
                t = self.phi[t];
            }
            // Report each cycle once, from its smallest member.
            if cycle.iter().min() == Some(&s) && cycle.iter().all(|&v| self.delta[v] == 1) {
                return Err(SchemeError::HyperbolicityViolated(
                    cycle.iter().map(|&v| self.names[v].clone()).collect(),
                ));
            }
        }
        let mut hit = vec![false; n];
        for s in (0..n).filter(|&s| self.delta[s] >= 2) {
            let mut t = self.phi[s];
            for _ in 0..n {
                if hit[t] {
                    break;
                }
                hit[t] = true;
                t = self.phi[t];
            }
        }
        if let Some(s) = (0..n).find(|&s| self.delta[s] == 1 && !hit[s]) {
            return Err(SchemeError::MinimalityViolated(self.names[s].clone()));
        }
        Ok(self.degree())
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            vertices: self.names.clone(),
            phi: (0..self.len())
                .map(|s| (self.names[s].clone(), self.names[self.phi[s]].clone()))
                .collect(),
            delta: (0..self.len()).map(|s| (self.names[s].clone(), self.delta[s])).collect(),
        }
    }
}

pub fn validate_scheme(s: &MappingScheme) -> Result<u32, SchemeError> {
    s.validate()
}

/// `{ "vertices": [...], "phi": { s: t }, "delta": { s: k } }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeFile {
    pub vertices: Vec<String>,
    pub phi: BTreeMap<String, String>,
    pub delta: BTreeMap<String, u32>,
}

impl SchemeFile {
    /// Structural conversion; call [`MappingScheme::validate`] for the dynamical checks.
    pub fn to_scheme(&self) -> Result<MappingScheme, SchemeError> {
        let idx = |name: &String| {
            self.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| SchemeError::UnknownVertex(name.clone()))
        };
        for k in self.phi.keys().chain(self.delta.keys()) {
            idx(k)?;
        }
        let phi = self
            .vertices
            .iter()
            .map(|v| {
                let t = self.phi.get(v).ok_or_else(|| SchemeError::MissingField(v.clone(), "phi"))?;
                idx(t)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let delta = self
            .vertices
            .iter()
            .map(|v| self.delta.get(v).copied().ok_or_else(|| SchemeError::MissingField(v.clone(), "delta")))
            .collect::<Result<Vec<_>, _>>()?;
        MappingScheme::unchecked(self.vertices.clone(), phi, delta)
    }
}
