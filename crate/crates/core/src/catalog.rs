//! Registry of identities as pairs of named builders, and the driver that
//! verifies them cell by cell.
//!
//! Every series the library can build is registered once by name in
//! [`BUILDERS`]; identities refer to builders only through those names, so the
//! command line, the tests and the catalog share one construction path.

use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bivariate::builders::{self as b, BuildParams};
use crate::bivariate::{TailBound, ZQSeries};
use crate::partitions::{count_series, refined_rows, PartitionMode};
use crate::series::{Mismatch, Monomial, QSeries};
use crate::snsum::{self, Chain, Verdict};
use crate::{Error, Result};

/// Output of a builder: a series in `q`, or in `(z, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Built {
    Uni(QSeries),
    Bi(ZQSeries),
}

impl Built {
    pub fn is_bivariate(&self) -> bool {
        matches!(self, Built::Bi(_))
    }

    fn into_uni(self) -> Result<QSeries> {
        match self {
            Built::Uni(s) => Ok(s),
            Built::Bi(_) => Err(Error::InvalidArgument(
                "expected a series in q alone".into(),
            )),
        }
    }

    fn into_bi(self) -> Result<ZQSeries> {
        match self {
            Built::Bi(s) => Ok(s),
            Built::Uni(_) => Err(Error::InvalidArgument(
                "expected a series in z and q".into(),
            )),
        }
    }
}

type BuildFn = fn(&BuildParams) -> Built;

/// A named series builder.
#[derive(Clone, Copy)]
pub struct BuilderEntry {
    pub name: &'static str,
    pub bivariate: bool,
    pub formula: &'static str,
    build: BuildFn,
}

impl BuilderEntry {
    pub fn build(&self, params: &BuildParams) -> Built {
        (self.build)(params)
    }
}

impl std::fmt::Debug for BuilderEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BuilderEntry")
            .field("name", &self.name)
            .field("bivariate", &self.bivariate)
            .finish()
    }
}

macro_rules! uni {
    ($name:literal, $formula:literal, $f:expr) => {
        BuilderEntry {
            name: $name,
            bivariate: false,
            formula: $formula,
            build: |p| Built::Uni($f(p)),
        }
    };
}

macro_rules! bi {
    ($name:literal, $formula:literal, $f:expr) => {
        BuilderEntry {
            name: $name,
            bivariate: true,
            formula: $formula,
            build: |p| Built::Bi($f(p)),
        }
    };
}

fn skip_smallest(p: &BuildParams) -> Option<u64> {
    p.skip_term.map(|n| n as u64)
}

fn pomega_count(p: &BuildParams) -> QSeries {
    count_series(PartitionMode::Omega, p.q_order, skip_smallest(p))
}

fn pnu_count(p: &BuildParams) -> QSeries {
    count_series(PartitionMode::Nu, p.q_order, skip_smallest(p))
}

fn refined(mode: PartitionMode, p: &BuildParams) -> ZQSeries {
    // a partition with m parts besides the smallest has size > m
    ZQSeries::from_rows(refined_rows(mode, p.z_order, p.q_order, skip_smallest(p)))
        .with_tail(TailBound::Slope(1))
}

fn pomega_refined(p: &BuildParams) -> ZQSeries {
    refined(PartitionMode::Omega, p)
}

fn pnu_refined(p: &BuildParams) -> ZQSeries {
    refined(PartitionMode::Nu, p)
}

/// Every registered builder, sorted by name.
pub const BUILDERS: &[BuilderEntry] = &[
    uni!("ady-nu-lhs", "sum q^n (-q^{n+1};q)_n (-q^{2n+2};q^2)_inf", b::ady_nu_lhs),
    uni!("ady-omega-lhs", "sum_{n>=1} q^n / ((q^n;q)_{n+1} (q^{2n+2};q^2)_inf)", b::ady_omega_lhs),
    uni!("entry952-lhs", "sum (q;q^2)_n q^n", b::entry952_lhs),
    uni!("entry953-lhs", "sum q^n / (-q;q^2)_{n+1}", b::entry953_lhs),
    uni!("entry953-rhs", "sum (-1)^j q^{6j^2+4j} (1 + q^{4j+2})", b::entry953_rhs),
    uni!("nu-neg-q", "nu(-q) = sum q^{n^2+n} / (q;q^2)_{n+1}", b::nu_neg_q),
    bi!("nu-z-eulerian", "sum q^{n^2+n} / (-zq;q^2)_{n+1}", b::nu_z_eulerian),
    bi!("nu-z-product", "sum (q/z;q^2)_n (-zq)^n", b::nu_z_product),
    bi!("nu1-z-eulerian", "sum z^n q^{n^2+n} / (-q;q^2)_{n+1}", b::nu1_z_eulerian),
    bi!("nu1-z-product", "sum (zq;q^2)_n (-q)^n", b::nu1_z_product),
    bi!("omega-z-eulerian", "sum z^n q^{2n^2+2n} / ((q;q^2)_{n+1} (zq;q^2)_{n+1})", b::omega_z_eulerian),
    bi!("omega-z-simple", "sum z^n q^n / (q;q^2)_{n+1}", b::omega_z_simple),
    bi!("omega-z-slashed", "sum q^n / (zq;q^2)_{n+1}", b::omega_z_slashed),
    uni!("pnt-nu-lhs", "sum q^n (q^{n+1};q)_n (q^{2n+2};q^2)_inf", b::pnt_nu_lhs),
    uni!("pnt-nu-rhs", "sum (-1)^j q^{3j^2+2j} (1 + q^{2j+1})", b::pentagonal_nu),
    uni!("pnt-omega-lhs", "sum_{n>=1} q^n / ((-q^n;q)_{n+1} (-q^{2n+2};q^2)_inf)", b::pnt_omega_lhs),
    uni!("pnt-omega-rhs", "sum (-1)^j q^{6j^2+4j+1} (1 + q^{4j+2})", b::pentagonal_omega),
    uni!("pnu-count", "sum p_nu(n) q^n by enumeration", pnu_count),
    bi!("pnu-refined", "sum z^m q^n over p_nu partitions, m = parts besides the smallest", pnu_refined),
    uni!("pomega-count", "sum p_omega(n) q^n by enumeration", pomega_count),
    bi!("pomega-refined", "sum z^m q^n over p_omega partitions, m = parts besides the smallest", pomega_refined),
    uni!("q-omega", "q omega(q) = sum q^{2n^2+2n+1} / (q;q^2)_{n+1}^2", b::q_omega),
    bi!("thm1-nu-lhs", "sum q^n (-zq^{n+1};q)_n (-zq^{2n+2};q^2)_inf", b::thm1_nu_lhs),
    bi!("thm1-nu-rhs", "sum z^n q^{n^2+n} / (q;q^2)_{n+1}", b::thm1_nu_rhs),
    bi!("thm1-omega-lhs", "sum_{n>=1} q^n / ((zq^n;q)_{n+1} (zq^{2n+2};q^2)_inf)", b::thm1_omega_lhs),
    bi!("thm1-omega-rhs", "sum z^n q^{2n^2+2n+1} / ((q;q^2)_{n+1} (zq;q^2)_{n+1})", b::thm1_omega_rhs),
    bi!("thm2omega-rhs", "sum_{n>=1} z^{n-1} q^n / (q;q^2)_n", b::thm2omega_rhs),
    uni!("watson-nu", "nu(q) = sum q^{n^2+n} / (-q;q^2)_{n+1}", b::watson_nu),
    uni!("watson-omega", "omega(q) = sum q^{2n^2+2n} / (q;q^2)_{n+1}^2", b::watson_omega),
];

pub fn builder(name: &str) -> Result<&'static BuilderEntry> {
    BUILDERS
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownBuilder(name.to_string()))
}

pub fn builder_names() -> impl Iterator<Item = &'static str> {
    BUILDERS.iter().map(|e| e.name)
}

/// An injected fault, applied every time the targeted builder runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Add `delta` to one cell of the output.
    AddCell {
        z_degree: usize,
        q_exponent: usize,
        delta: BigInt,
    },
    /// Drop one term of the outer sum (for enumeration oracles: every
    /// partition whose smallest part is this value).
    SkipTerm(usize),
}

/// One side of an identity, described in terms of registered builders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Builder(&'static str),
    /// A two-variable builder at `z = ±q^k`, built with `z_order = q_order`.
    AtZ(&'static str, Monomial),
    /// `q^k` times a one-variable side.
    Shifted(Box<Side>, usize),
    /// A one-variable side with `q -> ±q^k`.
    Substituted(Box<Side>, Monomial),
    /// One-variable sides stacked as rows `0, 1, ...` for a joint comparison.
    Rows(Vec<Side>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Univariate,
    Bivariate,
    /// Several one-variable identities checked together, one per row.
    Stacked,
    /// A family of identities indexed by `N = 0..=n_max`.
    PerN,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sides {
    Pair { lhs: Side, rhs: Side },
    Chain(Chain),
    Reversal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: &'static str,
    pub description: &'static str,
    /// A short quotation that locates the identity in its source.
    pub location: &'static str,
    pub kind: IdentityKind,
    pub sides: Sides,
    /// Upper limit on the q order (enumeration oracles get expensive).
    pub q_cap: Option<usize>,
}

/// Requested truncation; `None` falls back to the per-kind default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    pub q_order: Option<usize>,
    pub z_order: Option<usize>,
    pub n_max: Option<usize>,
}

pub const DEFAULT_UNIVARIATE_Q: usize = 200;
pub const DEFAULT_BIVARIATE_Q: usize = 60;
pub const DEFAULT_BIVARIATE_Z: usize = 40;
pub const DEFAULT_N_MAX: usize = 25;

impl Orders {
    pub fn new(q_order: usize, z_order: usize, n_max: usize) -> Self {
        Orders {
            q_order: Some(q_order),
            z_order: Some(z_order),
            n_max: Some(n_max),
        }
    }

    pub fn q(q_order: usize) -> Self {
        Orders {
            q_order: Some(q_order),
            ..Default::default()
        }
    }

    pub fn zq(z_order: usize, q_order: usize) -> Self {
        Orders {
            q_order: Some(q_order),
            z_order: Some(z_order),
            n_max: None,
        }
    }

    pub fn n(n_max: usize) -> Self {
        Orders {
            n_max: Some(n_max),
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of one verification. For per-`N` families `z_order` carries
/// `n_max` and a mismatch's `z_degree` carries the failing `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub identity: String,
    pub status: Status,
    pub q_order: usize,
    pub z_order: Option<usize>,
    pub first_mismatch: Option<Mismatch>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Equal in everything except timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        VerifyReport {
            elapsed_ms: 0,
            ..self.clone()
        } == VerifyReport {
            elapsed_ms: 0,
            ..other.clone()
        }
    }
}

fn pair(lhs: Side, rhs: Side) -> Sides {
    Sides::Pair { lhs, rhs }
}

fn at(name: &'static str, z: Monomial) -> Side {
    Side::AtZ(name, z)
}

use Side::Builder as B;

fn standard_records() -> Vec<IdentityRecord> {
    use IdentityKind::*;
    let rec = |id, description, location, kind, sides| IdentityRecord {
        id,
        description,
        location,
        kind,
        sides,
        q_cap: None,
    };
    let one = Monomial::one();
    let minus_one = Monomial::neg(0);
    let mut out = vec![
        rec(
            "watson-omega-nu-defs",
            "omega(z;q) and nu(z;q) at z = 1 reduce to omega(q) and nu(q) (rows 0 and 1)",
            "Note that omega(1;q)=omega(q) and nu(1,q)=nu(q)",
            Stacked,
            pair(
                Side::Rows(vec![at("omega-z-eulerian", one), at("nu-z-eulerian", one)]),
                Side::Rows(vec![B("watson-omega"), B("watson-nu")]),
            ),
        ),
        rec(
            "ady-omega",
            "product form of the p_omega generating function equals q omega(q)",
            "q^{2n^2+2n+1}",
            Univariate,
            pair(B("ady-omega-lhs"), B("q-omega")),
        ),
        rec(
            "ady-nu",
            "product form of the p_nu generating function equals nu(-q)",
            "q^n (-q^{n+1};q)_n (-q^{2n+2};q^2)_{\\infty}",
            Univariate,
            pair(B("ady-nu-lhs"), B("nu-neg-q")),
        ),
        IdentityRecord {
            q_cap: Some(40),
            ..rec(
                "pomega-oracle",
                "enumerated p_omega(n) are the coefficients of q omega(q)",
                "p_{omega}(n) = q omega(q)",
                Univariate,
                pair(B("pomega-count"), B("q-omega")),
            )
        },
        IdentityRecord {
            q_cap: Some(40),
            ..rec(
                "pnu-oracle",
                "enumerated p_nu(n) are the coefficients of nu(-q)",
                "p_{nu}(n)= nu(-q)",
                Univariate,
                pair(B("pnu-count"), B("nu-neg-q")),
            )
        },
        rec(
            "thm1-omega",
            "two-variable generalization of the p_omega identity",
            "z^nq^{2n^2+2n+1}",
            Bivariate,
            pair(B("thm1-omega-lhs"), B("thm1-omega-rhs")),
        ),
        rec(
            "thm1-nu",
            "two-variable generalization of the p_nu identity",
            "q^n(-zq^{n+1};q)_{n} (-zq^{2n+2};q^2)_{\\infty}",
            Bivariate,
            pair(B("thm1-nu-lhs"), B("thm1-nu-rhs")),
        ),
        rec(
            "thm2omega",
            "the p_omega product form equals sum z^{n-1} q^n / (q;q^2)_n",
            "z^{n-1} q^{n}",
            Bivariate,
            pair(B("thm1-omega-lhs"), B("thm2omega-rhs")),
        ),
        rec(
            "omega-z-forms-a",
            "omega(z;q): Eulerian form equals sum z^n q^n / (q;q^2)_{n+1}",
            "z^n q^{n}}{(q;q^2)_{n+1}",
            Bivariate,
            pair(B("omega-z-eulerian"), B("omega-z-simple")),
        ),
        rec(
            "omega-z-forms-b",
            "omega(z;q): sum z^n q^n / (q;q^2)_{n+1} equals sum q^n / (zq;q^2)_{n+1}",
            "q^n}{(zq;q^2)_{n+1}",
            Bivariate,
            pair(B("omega-z-simple"), B("omega-z-slashed")),
        ),
        rec(
            "nu-z-forms",
            "nu(z;q): Eulerian form equals sum (q/z;q^2)_n (-zq)^n",
            "(q/z;q^2)_n (-zq)^n",
            Bivariate,
            pair(B("nu-z-eulerian"), B("nu-z-product")),
        ),
        rec(
            "nu1-forms",
            "nu_1(z;q): Eulerian form equals sum (zq;q^2)_n (-q)^n",
            "(zq;q^2)_n (-q)^n",
            Bivariate,
            pair(B("nu1-z-eulerian"), B("nu1-z-product")),
        ),
        rec(
            "entry-953",
            "sum q^n / (-q;q^2)_{n+1} = sum (-1)^j q^{6j^2+4j} (1 + q^{4j+2})",
            "q^{6j^2+4j} (1+q^{4j+2})",
            Univariate,
            pair(B("entry953-lhs"), B("entry953-rhs")),
        ),
        rec(
            "entry-952",
            "sum (q;q^2)_n q^n = sum (-1)^j q^{3j^2+2j} (1 + q^{2j+1})",
            "(q;q^2)_{n} q^n",
            Univariate,
            pair(B("entry952-lhs"), B("pnt-nu-rhs")),
        ),
        rec(
            "pnt-omega",
            "pentagonal number analogue for p_omega",
            "6j^2+4j+1",
            Univariate,
            pair(B("pnt-omega-lhs"), B("pnt-omega-rhs")),
        ),
        rec(
            "pnt-nu",
            "pentagonal number analogue for p_nu",
            "3j^2+2j",
            Univariate,
            pair(B("pnt-nu-lhs"), B("pnt-nu-rhs")),
        ),
        rec(
            "eq11-bridge",
            "the p_omega product form at z = -1 equals q times omega(-1;q) in the form sum q^n / (zq;q^2)_{n+1}",
            "Setting z=-1",
            Univariate,
            pair(
                at("thm1-omega-lhs", minus_one),
                Side::Shifted(Box::new(at("omega-z-slashed", minus_one)), 1),
            ),
        ),
        rec(
            "nu-bridge",
            "the p_nu product form at z = -1 equals nu_1(-1;-q) in the form sum (zq;q^2)_n (-q)^n",
            "set z=-1",
            Univariate,
            pair(
                at("thm1-nu-lhs", minus_one),
                Side::Substituted(Box::new(at("nu1-z-product", minus_one)), Monomial::neg(1)),
            ),
        ),
        rec(
            "thm1-omega-z1",
            "both sides of the two-variable p_omega identity at z = 1 equal q omega(q)",
            "when z=1",
            Stacked,
            pair(
                Side::Rows(vec![at("thm1-omega-lhs", one), at("thm1-omega-rhs", one)]),
                Side::Rows(vec![B("q-omega"), B("q-omega")]),
            ),
        ),
        rec(
            "thm1-nu-z1",
            "both sides of the two-variable p_nu identity at z = 1 equal nu(-q)",
            "when z=1",
            Stacked,
            pair(
                Side::Rows(vec![at("thm1-nu-lhs", one), at("thm1-nu-rhs", one)]),
                Side::Rows(vec![B("nu-neg-q"), B("nu-neg-q")]),
            ),
        ),
        IdentityRecord {
            q_cap: Some(40),
            ..rec(
                "pomega-refined",
                "z counts the parts besides one copy of the smallest in p_omega partitions",
                "according to the number of parts",
                Bivariate,
                pair(B("pomega-refined"), B("thm1-omega-lhs")),
            )
        },
        IdentityRecord {
            q_cap: Some(40),
            ..rec(
                "pnu-refined",
                "z counts the parts besides the smallest in p_nu partitions",
                "according to the number of parts",
                Bivariate,
                pair(B("pnu-refined"), B("thm1-nu-lhs")),
            )
        },
        rec(
            "eq17-eq18-reversal",
            "q -> 1/q scaled by q^{N^2+N} maps each summand and the right side of the q^{binom(N-s+1,2)} form onto (-1)^N times the q^s form",
            "replace q by 1/q and multiply by q^{N^2+N}",
            PerN,
            Sides::Reversal,
        ),
    ];
    let chains: [(Chain, &str, &str); 7] = [
        (
            Chain::Geom,
            "sum_{s<=N} q^{2s} / (q^2;q^2)_s = 1 / (q^2;q^2)_N",
            "mathematical induction reveals immediately",
        ),
        (
            Chain::Eq111,
            "sum_s q^{2s} / (q^2;q^2)_s (1 / (q^{1+N+s};q)_{N-s+1} - 1) = q^{N+1} / (q;q^2)_{N+1}",
            "is equivalent to the assertion",
        ),
        (
            Chain::Eq12,
            "sum_s q^{2s} / ((q^2;q^2)_s (q^{1+N+s};q)_{N-s+1}) = 1/(q^2;q^2)_N + q^{N+1}/(q;q^2)_{N+1}",
            "rewriting",
        ),
        (
            Chain::Eq13,
            "sum_s q^{2s} (q;q)_{N+s} / (q^2;q^2)_s = (q;q^2)_{N+1} + q^{N+1} (q^2;q^2)_N",
            "multiply both sides by (q;q)_{2N+1}",
        ),
        (
            Chain::Eq16,
            "sum_s q^{binom(N-s+1,2)} / ((q^2;q^2)_s (q^{N+s+1};q)_{N-s+1}) = 1 / (q;q^2)_{N+1}",
            "sum the series on n by the q-binomial theorem",
        ),
        (
            Chain::Eq17,
            "sum_s q^{binom(N-s+1,2)} (q;q)_{N+s} / (q^2;q^2)_s = (q^2;q^2)_N",
            "multiply (q;q)_{2N+1}",
        ),
        (
            Chain::Eq18,
            "sum_s q^s (q;q)_{N+s} / (q^2;q^2)_s = (q^2;q^2)_N, reached from the previous form by q -> 1/q",
            "replace q by 1/q",
        ),
    ];
    out.extend(chains.into_iter().map(|(c, description, location)| IdentityRecord {
        id: c.name(),
        description,
        location,
        kind: PerN,
        sides: Sides::Chain(c),
        q_cap: None,
    }));
    out.sort_by_key(|r| r.id);
    out
}

/// A set of identities plus any injected builder faults.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    records: Vec<IdentityRecord>,
    mutations: Vec<(&'static str, Mutation)>,
}

impl Catalog {
    pub fn standard() -> Self {
        Catalog {
            records: standard_records(),
            mutations: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        Catalog::default()
    }

    pub fn records(&self) -> &[IdentityRecord] {
        &self.records
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.records.iter().map(|r| r.id)
    }

    pub fn record(&self, id: &str) -> Result<&IdentityRecord> {
        self.records
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    /// Registers an identity; ids must be unique and builders must resolve.
    pub fn insert(&mut self, record: IdentityRecord) -> Result<()> {
        if self.records.iter().any(|r| r.id == record.id) {
            return Err(Error::InvalidArgument(format!(
                "identity `{}` is already registered",
                record.id
            )));
        }
        if let Sides::Pair { lhs, rhs } = &record.sides {
            for name in side_builders(lhs).into_iter().chain(side_builders(rhs)) {
                builder(name)?;
            }
        }
        let pos = self.records.partition_point(|r| r.id < record.id);
        self.records.insert(pos, record);
        Ok(())
    }

    /// The same catalog with a fault injected into one builder.
    pub fn with_mutation(mut self, builder_name: &str, mutation: Mutation) -> Result<Self> {
        let entry = builder(builder_name)?;
        self.mutations.push((entry.name, mutation));
        Ok(self)
    }

    /// Runs a registered builder, applying any injected faults.
    pub fn build(&self, name: &str, params: &BuildParams) -> Result<Built> {
        let entry = builder(name)?;
        let mut params = params.clone();
        let mine: Vec<&Mutation> = self
            .mutations
            .iter()
            .filter(|(n, _)| *n == entry.name)
            .map(|(_, m)| m)
            .collect();
        for m in &mine {
            if let Mutation::SkipTerm(k) = m {
                params.skip_term = Some(*k);
            }
        }
        let mut out = entry.build(&params);
        for m in mine {
            if let Mutation::AddCell {
                z_degree,
                q_exponent,
                delta,
            } = m
            {
                match &mut out {
                    Built::Uni(s) if *z_degree == 0 => s.add_to_coeff(*q_exponent, delta),
                    Built::Uni(_) => {}
                    Built::Bi(s) => s.perturb(*z_degree, *q_exponent, delta),
                }
            }
        }
        Ok(out)
    }

    fn eval(&self, side: &Side, z_order: usize, q_order: usize) -> Result<Built> {
        match side {
            Side::Builder(name) => self.build(name, &BuildParams::new(z_order, q_order)),
            Side::AtZ(name, z) => {
                let s = self
                    .build(name, &BuildParams::new(q_order, q_order))?
                    .into_bi()?;
                Ok(Built::Uni(s.specialize(*z)?))
            }
            Side::Shifted(inner, k) => Ok(Built::Uni(
                self.eval(inner, z_order, q_order)?.into_uni()?.shift(*k),
            )),
            Side::Substituted(inner, m) => Ok(Built::Uni(
                self.eval(inner, z_order, q_order)?
                    .into_uni()?
                    .substitute(*m)?,
            )),
            Side::Rows(sides) => {
                let rows = sides
                    .iter()
                    .map(|s| self.eval(s, z_order, q_order)?.into_uni())
                    .collect::<Result<Vec<_>>>()?;
                Ok(Built::Bi(ZQSeries::from_rows(rows)))
            }
        }
    }

    /// Verifies one identity at the requested orders.
    pub fn verify(&self, id: &str, orders: &Orders) -> Result<VerifyReport> {
        let record = self.record(id)?;
        let start = Instant::now();
        let cap = |q: usize| record.q_cap.map_or(q, |c| q.min(c));
        let (q_order, z_order, mismatch) = match (&record.sides, record.kind) {
            (Sides::Pair { lhs, rhs }, kind) => {
                let (q, z) = match kind {
                    IdentityKind::Bivariate => {
                        let q = cap(orders.q_order.unwrap_or(DEFAULT_BIVARIATE_Q));
                        let z = orders.z_order.unwrap_or(DEFAULT_BIVARIATE_Z);
                        (q, Some(z.min(record.q_cap.unwrap_or(z))))
                    }
                    _ => (cap(orders.q_order.unwrap_or(DEFAULT_UNIVARIATE_Q)), None),
                };
                let zz = z.unwrap_or(0);
                let (l, r) = rayon::join(|| self.eval(lhs, zz, q), || self.eval(rhs, zz, q));
                let m = match (l?, r?) {
                    (Built::Uni(a), Built::Uni(b)) => a.first_mismatch(&b),
                    (Built::Bi(a), Built::Bi(b)) => a.first_mismatch(&b),
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "the two sides of `{id}` have different shapes"
                        )))
                    }
                };
                (q, z, m)
            }
            (Sides::Chain(chain), _) => {
                let n_max = orders.n_max.unwrap_or(DEFAULT_N_MAX);
                let q = if chain.is_polynomial() {
                    // S_N(2) has the largest degree, N^2 + 2N
                    n_max * n_max + 2 * n_max
                } else {
                    snsum::chain_series_order(n_max)
                };
                let m = snsum::check_chain_upto(*chain, n_max).map(|(n, mm)| Mismatch {
                    z_degree: n,
                    ..mm
                });
                (q, Some(n_max), m)
            }
            (Sides::Reversal, _) => {
                let n_max = orders.n_max.unwrap_or(DEFAULT_N_MAX);
                let m = (0..=n_max)
                    .into_par_iter()
                    .filter_map(|n| match snsum::check_reversal(n) {
                        Verdict::Pass => None,
                        Verdict::Fail(mm) => Some(Mismatch { z_degree: n, ..mm }),
                    })
                    .min_by_key(|mm| mm.z_degree);
                (n_max * n_max + n_max, Some(n_max), m)
            }
        };
        Ok(VerifyReport {
            identity: record.id.to_string(),
            status: if mismatch.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            q_order,
            z_order,
            first_mismatch: mismatch,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    /// Verifies every identity in parallel; reports come back sorted by id.
    pub fn verify_all(&self, orders: &Orders) -> Result<Vec<VerifyReport>> {
        let mut out = self
            .records
            .par_iter()
            .map(|r| self.verify(r.id, orders))
            .collect::<Result<Vec<_>>>()?;
        out.sort_by(|a, b| a.identity.cmp(&b.identity));
        Ok(out)
    }
}

fn side_builders(side: &Side) -> Vec<&'static str> {
    match side {
        Side::Builder(n) | Side::AtZ(n, _) => vec![n],
        Side::Shifted(inner, _) | Side::Substituted(inner, _) => side_builders(inner),
        Side::Rows(v) => v.iter().flat_map(side_builders).collect(),
    }
}

impl IdentityRecord {
    /// Names of the builders this identity evaluates.
    pub fn builders(&self) -> Vec<&'static str> {
        match &self.sides {
            Sides::Pair { lhs, rhs } => {
                let mut v = side_builders(lhs);
                v.extend(side_builders(rhs));
                v.sort_unstable();
                v.dedup();
                v
            }
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_sorted_and_resolvable() {
        let names: Vec<&str> = builder_names().collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(names, sorted);
        let cat = Catalog::standard();
        for r in cat.records() {
            for name in r.builders() {
                assert!(builder(name).is_ok(), "{} uses {name}", r.id);
            }
        }
        let mut ids: Vec<&str> = cat.ids().collect();
        ids.dedup();
        assert_eq!(ids.len(), cat.records().len());
    }

    #[test]
    fn unknown_names_are_errors() {
        let cat = Catalog::standard();
        assert!(matches!(
            cat.verify("no-such-id", &Orders::default()),
            Err(Error::UnknownIdentity(_))
        ));
        assert!(matches!(
            Catalog::standard().with_mutation("nope", Mutation::SkipTerm(0)),
            Err(Error::UnknownBuilder(_))
        ));
    }

    #[test]
    fn small_orders_pass() {
        let cat = Catalog::standard();
        for r in cat.verify_all(&Orders::new(30, 10, 6)).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn injected_cell_is_reported() {
        let cat = Catalog::standard()
            .with_mutation(
                "thm1-omega-rhs",
                Mutation::AddCell {
                    z_degree: 1,
                    q_exponent: 5,
                    delta: BigInt::from(1),
                },
            )
            .unwrap();
        let r = cat.verify("thm1-omega", &Orders::zq(10, 20)).unwrap();
        assert_eq!(r.status, Status::Fail);
        let m = r.first_mismatch.unwrap();
        assert_eq!((m.z_degree, m.q_exponent), (1, 5));
        assert_eq!(m.rhs - m.lhs, BigInt::from(1));
    }

    #[test]
    fn empty_catalog_reports_nothing() {
        assert!(Catalog::empty().verify_all(&Orders::default()).unwrap().is_empty());
    }

    #[test]
    fn insert_rejects_duplicates_and_unknown_builders() {
        let mut cat = Catalog::empty();
        let rec = Catalog::standard().record("pnt-nu").unwrap().clone();
        cat.insert(rec.clone()).unwrap();
        assert!(cat.insert(rec).is_err());
        let bad = IdentityRecord {
            id: "bad",
            description: "",
            location: "",
            kind: IdentityKind::Univariate,
            sides: pair(B("missing"), B("q-omega")),
            q_cap: None,
        };
        assert!(matches!(cat.insert(bad), Err(Error::UnknownBuilder(_))));
    }

    #[test]
    fn caps_limit_the_recorded_order() {
        let r = Catalog::standard()
            .verify("pomega-oracle", &Orders::q(100))
            .unwrap();
        assert_eq!(r.q_order, 40);
        assert!(r.passed());
    }
}
