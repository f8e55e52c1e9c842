//! Text forms of vectors, wave packets and field monomials.

use std::collections::BTreeMap;

use spacelike_core::{FieldMonomial, OnShellAmplitude, Vec3};

use crate::UsageError;

pub fn parse_vec3(s: &str) -> Result<Vec3, UsageError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(UsageError(format!("expected x,y,z, got {s:?}")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| UsageError(format!("{p:?} is not a number")))?;
    }
    Ok(v)
}

/// `NAME=x,y,z/kx,ky,kz/sigma`.
pub fn parse_packet(s: &str) -> Result<(String, OnShellAmplitude), UsageError> {
    let (name, rest) = s
        .split_once('=')
        .ok_or_else(|| UsageError(format!("packet {s:?} must look like NAME=x,y,z/kx,ky,kz/sigma")))?;
    let fields: Vec<&str> = rest.split('/').collect();
    let [x, k, sigma] = fields[..] else {
        return Err(UsageError(format!("packet {s:?} must look like NAME=x,y,z/kx,ky,kz/sigma")));
    };
    let sigma: f64 = sigma
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("{sigma:?} is not a width")))?;
    let amp = OnShellAmplitude::new(parse_vec3(x)?, parse_vec3(k)?, sigma)
        .map_err(|e| UsageError(e.to_string()))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(UsageError(format!("packet name {name:?} must be alphanumeric")));
    }
    Ok((name.to_string(), amp))
}

/// Named packets available to monomial specs.
#[derive(Debug, Clone)]
pub struct PacketPool(BTreeMap<String, OnShellAmplitude>);

impl PacketPool {
    /// u at rest at the origin, v and w displaced and moving, all of width σ.
    pub fn standard(sigma: f64) -> Result<Self, UsageError> {
        let mk = |x: Vec3, k: Vec3| OnShellAmplitude::new(x, k, sigma).map_err(|e| UsageError(e.to_string()));
        let mut pool = BTreeMap::new();
        pool.insert("u".to_string(), mk([0.0; 3], [0.0; 3])?);
        pool.insert("v".to_string(), mk([0.5, 0.0, 0.0], [0.3, 0.0, 0.0])?);
        pool.insert("w".to_string(), mk([0.0, 0.5, 0.0], [0.0, 0.4, 0.0])?);
        Ok(Self(pool))
    }

    pub fn insert(&mut self, name: String, amp: OnShellAmplitude) {
        self.0.insert(name, amp);
    }

    /// `u*u*v`; an empty string or `1` is the identity.
    pub fn monomial(&self, text: &str) -> Result<FieldMonomial, UsageError> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(FieldMonomial::identity());
        }
        text.split('*')
            .map(|n| {
                self.0
                    .get(n.trim())
                    .copied()
                    .ok_or_else(|| UsageError(format!("unknown packet {:?} in {text:?}", n.trim())))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FieldMonomial::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_packets_and_monomials() {
        let (name, p) = parse_packet("q=1,0,0/0,0.5,0/2").unwrap();
        assert_eq!(name, "q");
        assert_eq!(p.centre(), [1.0, 0.0, 0.0]);
        assert_eq!(p.sigma(), 2.0);
        let mut pool = PacketPool::standard(1.0).unwrap();
        pool.insert(name, p);
        assert_eq!(pool.monomial("u*q*u").unwrap().len(), 3);
        assert!(pool.monomial("1").unwrap().is_empty());
        assert!(pool.monomial("u*z").is_err());
        assert!(parse_packet("q=1,0/0,0,0/1").is_err());
        assert!(parse_packet("q=0,0,0/0,0,0/-1").is_err());
    }
}
