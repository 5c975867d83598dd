//! Desk-scale cryptographic primitives and the exhaustive sweeps that check
//! their claimed properties over small domains.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

/// Largest message, randomness or key accepted by the toy schemes.
pub const MAX_TOY_LEN: usize = 8;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CryptoError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("input of {0} bytes exceeds the toy domain")]
    DomainExceeded(usize),
}

/// One-time pad: bytewise XOR of equal-length strings.
pub fn otp(k: &[u8], m: &[u8]) -> Result<Vec<u8>, CryptoError> {
    if k.len() != m.len() {
        return Err(CryptoError::LengthMismatch(k.len(), m.len()));
    }
    Ok(k.iter().zip(m).map(|(a, b)| a ^ b).collect())
}

/// Randomized one-time pad: the ciphertext is `(rho, m ⊕ k ⊕ rho)`.
pub fn randomized_otp(k: &[u8], m: &[u8], rho: &[u8]) -> Result<(Vec<u8>, Vec<u8>), CryptoError> {
    let body = otp(&otp(k, m)?, rho)?;
    Ok((rho.to_vec(), body))
}

/// Every byte string of length at most `max_len`.
pub fn strings_up_to(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|p| {
                (0..=255u8).map(move |b| {
                    let mut s = p.clone();
                    s.push(b);
                    s
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Every string of exactly `len` symbols drawn from `alphabet`.
pub fn strings_over(alphabet: &[u8], len: usize) -> Vec<Vec<u8>> {
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|p| {
                alphabet.iter().map(move |&b| {
                    let mut s = p.clone();
                    s.push(b);
                    s
                })
            })
            .collect();
    }
    layer
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HashKind {
    /// Length prefix followed by each byte XOR 0x5a. Injective.
    Masked,
    /// One byte: the sum of the input bytes mod 256. Collides freely.
    Folding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashSpec {
    pub name: &'static str,
    pub kind: HashKind,
    pub known_collision: Option<(Vec<u8>, Vec<u8>)>,
}

impl HashSpec {
    pub fn injective() -> Self {
        Self {
            name: "masked",
            kind: HashKind::Masked,
            known_collision: None,
        }
    }

    pub fn colliding() -> Self {
        Self {
            name: "folding",
            kind: HashKind::Folding,
            known_collision: Some((b"ab".to_vec(), b"ba".to_vec())),
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        [Self::injective(), Self::colliding()]
            .into_iter()
            .find(|h| h.name == name)
    }

    pub fn evaluate(&self, x: &[u8]) -> Vec<u8> {
        match self.kind {
            HashKind::Masked => {
                let mut out = Vec::with_capacity(x.len() + 1);
                out.push(x.len() as u8);
                out.extend(x.iter().map(|b| b ^ 0x5a));
                out
            }
            HashKind::Folding => vec![x.iter().fold(0u8, |acc, b| acc.wrapping_add(*b))],
        }
    }

    /// First pair of distinct inputs in `domain` with equal hashes.
    pub fn find_collision(&self, domain: &[Vec<u8>]) -> Option<(Vec<u8>, Vec<u8>)> {
        let mut seen: HashMap<Vec<u8>, &Vec<u8>> = HashMap::with_capacity(domain.len());
        for x in domain {
            if let Some(prev) = seen.insert(self.evaluate(x), x) {
                if prev != x {
                    return Some((prev.clone(), x.clone()));
                }
            }
        }
        None
    }

    /// All preimages of `y` in `domain`, in domain order.
    pub fn preimages(&self, y: &[u8], domain: &[Vec<u8>]) -> Vec<Vec<u8>> {
        domain
            .iter()
            .filter(|x| self.evaluate(x) == y)
            .cloned()
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BindingClass {
    PerfectlyBinding,
    Equivocable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CommitmentScheme {
    /// `c = x`, `d = r`. Binding, not hiding.
    Transparent,
    /// `c = x ⊕ r`, `d = r`. Perfectly hiding, opens to anything.
    XorPad,
    /// `c` is a constant byte, `d = x ‖ r`. Commits to nothing.
    Constant,
}

/// `(commitment, decommitment)`.
pub type Commitment = (Vec<u8>, Vec<u8>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleOpening {
    pub c: Vec<u8>,
    pub x: Vec<u8>,
    pub d: Vec<u8>,
    pub x2: Vec<u8>,
    pub d2: Vec<u8>,
}

impl CommitmentScheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::Transparent => "transparent",
            Self::XorPad => "xor-pad",
            Self::Constant => "constant",
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        [Self::Transparent, Self::XorPad, Self::Constant]
            .into_iter()
            .find(|s| s.name() == name)
    }

    pub fn binding_class(self) -> BindingClass {
        match self {
            Self::Transparent => BindingClass::PerfectlyBinding,
            Self::XorPad | Self::Constant => BindingClass::Equivocable,
        }
    }

    pub fn commit(self, x: &[u8], r: &[u8]) -> Result<Commitment, CryptoError> {
        for s in [x, r] {
            if s.len() > MAX_TOY_LEN {
                return Err(CryptoError::DomainExceeded(s.len()));
            }
        }
        match self {
            Self::Transparent => Ok((x.to_vec(), r.to_vec())),
            Self::XorPad => Ok((otp(x, r)?, r.to_vec())),
            Self::Constant => Ok((vec![0], [x, r].concat())),
        }
    }

    pub fn check(self, c: &[u8], d: &[u8], x: &[u8]) -> bool {
        match self {
            Self::Transparent => c == x && d.len() <= MAX_TOY_LEN,
            Self::XorPad => otp(x, d).is_ok_and(|v| v == c),
            Self::Constant => c == [0] && d.starts_with(x),
        }
    }

    /// A decommitment opening `c` to `x2`, for schemes that allow it.
    pub fn equivocate(self, c: &[u8], x2: &[u8]) -> Option<Vec<u8>> {
        match self {
            Self::Transparent => None,
            Self::XorPad => otp(c, x2).ok(),
            Self::Constant => Some(x2.to_vec()),
        }
    }

    /// Does every honest commitment over `xs × rs` open correctly?
    pub fn sweep_correctness(self, xs: &[Vec<u8>], rs: &[Vec<u8>]) -> bool {
        xs.iter().all(|x| {
            rs.iter().all(|r| match self.commit(x, r) {
                Ok((c, d)) => self.check(&c, &d, x),
                Err(_) => true,
            })
        })
    }

    /// Exhaustive search for a commitment with openings to two different
    /// messages. Candidate commitments are the image of `commit` over
    /// `xs × ds`; openings are searched over the same `xs × ds`.
    pub fn sweep_binding(self, xs: &[Vec<u8>], ds: &[Vec<u8>]) -> Option<DoubleOpening> {
        let mut image = BTreeSet::new();
        for x in xs {
            for r in ds {
                if let Ok((c, _)) = self.commit(x, r) {
                    image.insert(c);
                }
            }
        }
        for c in image {
            let mut first: Option<(&Vec<u8>, &Vec<u8>)> = None;
            for x in xs {
                for d in ds {
                    if !self.check(&c, d, x) {
                        continue;
                    }
                    match first {
                        None => first = Some((x, d)),
                        Some((x1, d1)) if x1 != x => {
                            return Some(DoubleOpening {
                                c,
                                x: x1.clone(),
                                d: d1.clone(),
                                x2: x.clone(),
                                d2: d.clone(),
                            })
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        None
    }

    /// How often each commitment value appears for message `x` over `rs`.
    pub fn commitment_histogram(self, x: &[u8], rs: &[Vec<u8>]) -> BTreeMap<Vec<u8>, usize> {
        let mut hist = BTreeMap::new();
        for r in rs {
            if let Ok((c, _)) = self.commit(x, r) {
                *hist.entry(c).or_insert(0) += 1;
            }
        }
        hist
    }

    /// Checks the declared binding class against a sweep over `xs × ds`.
    /// Returns the double-opening witness for equivocable schemes.
    pub fn verify_binding_class(self, xs: &[Vec<u8>], ds: &[Vec<u8>]) -> Result<Option<DoubleOpening>, String> {
        match (self.binding_class(), self.sweep_binding(xs, ds)) {
            (BindingClass::PerfectlyBinding, None) => Ok(None),
            (BindingClass::Equivocable, Some(w)) => Ok(Some(w)),
            (BindingClass::PerfectlyBinding, Some(w)) => {
                Err(format!("{} labelled binding but opens {:?} two ways", self.name(), w.c))
            }
            (BindingClass::Equivocable, None) => {
                Err(format!("{} labelled equivocable but no double opening found", self.name()))
            }
        }
    }
}

/// The binding sweep domain: 2-byte strings over a 16-symbol alphabet.
pub fn binding_domain() -> Vec<Vec<u8>> {
    strings_over(b"0123456789abcdef", 2)
}

/// All single bytes.
pub fn byte_domain() -> Vec<Vec<u8>> {
    strings_over(&(0..=255u8).collect::<Vec<_>>(), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn otp_identities() {
        let m = b"secret!!".to_vec();
        assert_eq!(otp(&[0; 8], &m).unwrap(), m);
        let ones = otp(&[0xff; 8], &m).unwrap();
        assert_eq!(ones, m.iter().map(|b| !b).collect::<Vec<_>>());
        assert_eq!(otp(b"ab", b"abc"), Err(CryptoError::LengthMismatch(2, 3)));
    }

    proptest! {
        #[test]
        fn otp_is_an_involution(pair in (0usize..=8).prop_flat_map(|n| (
            proptest::collection::vec(any::<u8>(), n),
            proptest::collection::vec(any::<u8>(), n),
        ))) {
            let (k, m) = pair;
            prop_assert_eq!(otp(&k, &otp(&k, &m).unwrap()).unwrap(), m);
        }

        #[test]
        fn xor_pad_opens_to_anything(x in proptest::collection::vec(any::<u8>(), 4),
                                     r in proptest::collection::vec(any::<u8>(), 4),
                                     x2 in proptest::collection::vec(any::<u8>(), 4)) {
            let (c, _) = CommitmentScheme::XorPad.commit(&x, &r).unwrap();
            let d2 = CommitmentScheme::XorPad.equivocate(&c, &x2).unwrap();
            prop_assert!(CommitmentScheme::XorPad.check(&c, &d2, &x2));
        }
    }

    #[test]
    fn domain_sizes() {
        assert_eq!(strings_up_to(2).len(), 1 + 256 + 65536);
        assert_eq!(binding_domain().len(), 256);
        assert_eq!(byte_domain().len(), 256);
    }

    #[test]
    fn masked_hash_is_injective_on_two_bytes() {
        let dom = strings_up_to(2);
        assert_eq!(HashSpec::injective().find_collision(&dom), None);
    }

    #[test]
    fn folding_hash_exposes_its_collision() {
        let h = HashSpec::colliding();
        let (a, b) = h.known_collision.clone().unwrap();
        assert_ne!(a, b);
        assert_eq!(h.evaluate(&a), h.evaluate(&b));
        assert!(h.find_collision(&strings_up_to(2)).is_some());
    }

    #[test]
    fn transparent_rejects_other_messages() {
        let s = CommitmentScheme::Transparent;
        let (c, d) = s.commit(b"ab", b"r1").unwrap();
        assert!(s.check(&c, &d, b"ab"));
        for x in binding_domain() {
            if x != b"ab" {
                assert!(!s.check(&c, &d, &x));
            }
        }
    }

    #[test]
    fn domain_exceeded() {
        assert_eq!(
            CommitmentScheme::Transparent.commit(&[0; 9], b""),
            Err(CryptoError::DomainExceeded(9))
        );
    }

    #[test]
    fn binding_classes_are_verified() {
        let two = binding_domain();
        assert_eq!(CommitmentScheme::Transparent.verify_binding_class(&two, &two), Ok(None));
        let one = byte_domain();
        let w = CommitmentScheme::XorPad.verify_binding_class(&one, &one).unwrap().unwrap();
        assert_ne!(w.x, w.x2);
        assert!(CommitmentScheme::XorPad.check(&w.c, &w.d, &w.x));
        assert!(CommitmentScheme::XorPad.check(&w.c, &w.d2, &w.x2));
    }

    #[test]
    fn correctness_over_domains() {
        let one = byte_domain();
        for s in [CommitmentScheme::Transparent, CommitmentScheme::XorPad, CommitmentScheme::Constant] {
            assert!(s.sweep_correctness(&one, &one), "{}", s.name());
        }
    }

    #[test]
    fn xor_pad_commitments_are_uniform() {
        let rs = byte_domain();
        for x in byte_domain() {
            let hist = CommitmentScheme::XorPad.commitment_histogram(&x, &rs);
            assert_eq!(hist.len(), 256);
            assert!(hist.values().all(|&n| n == 1));
        }
    }
}
