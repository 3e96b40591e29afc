//! Standard sample objects: small groupoids, seeded witness families of
//! representations and a handful of bibundles between them. Groupoids are
//! shared through one [`Fixtures`] value so that bibundles over the same
//! groupoid compose.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bibundle::{bundle_from_functor, BibundleDoc, PrincipalBibundle};
use crate::error::Result;
use crate::groupoid::{FiniteGroupoid, Functor, GroupTable};
use crate::rep::{random_representation, regular, sign, Representation};

/// Base seed of the witness families.
pub const WITNESS_SEED: u64 = 0x5e77_e5a4;

pub const RANDOM_WITNESSES: usize = 5;

#[derive(Clone, Debug)]
pub struct Fixtures {
    groupoids: BTreeMap<String, Arc<FiniteGroupoid>>,
}

impl Default for Fixtures {
    fn default() -> Self {
        Self::new()
    }
}

impl Fixtures {
    pub fn new() -> Self {
        let swap = FiniteGroupoid::action(&GroupTable::z2(), &["0", "1"], &[vec![0, 1], vec![1, 0]])
            .expect("swap action");
        let all = [
            FiniteGroupoid::unit(&["0", "1", "2"]).with_name("unit3"),
            FiniteGroupoid::unit(&["0", "1"]).with_name("unit2"),
            FiniteGroupoid::pair(&["0", "1", "2"]).with_name("pair3"),
            FiniteGroupoid::pair(&["0", "1"]).with_name("pair2"),
            FiniteGroupoid::point(&GroupTable::z2()).with_name("z2"),
            FiniteGroupoid::point(&GroupTable::symmetric(3)).with_name("s3"),
            FiniteGroupoid::point(&GroupTable::cyclic(1)).with_name("point"),
            swap.with_name("swap"),
        ];
        Fixtures {
            groupoids: all.into_iter().map(|g| (g.name().to_string(), Arc::new(g))).collect(),
        }
    }

    pub fn groupoid(&self, name: &str) -> Arc<FiniteGroupoid> {
        self.groupoids[name].clone()
    }

    pub fn groupoids(&self) -> impl Iterator<Item = &Arc<FiniteGroupoid>> {
        self.groupoids.values()
    }

    /// The groupoids on which the Serre–Swan suite runs.
    pub fn serre_swan_groupoids(&self) -> Vec<Arc<FiniteGroupoid>> {
        ["unit3", "pair3", "z2", "s3", "swap"].iter().map(|n| self.groupoid(n)).collect()
    }

    /// Trivial reps of rank 0–2, sign and regular on one-object
    /// groupoids, and [`RANDOM_WITNESSES`] seeded random reps.
    pub fn witness_family(&self, g: &Arc<FiniteGroupoid>) -> Result<Vec<(String, Representation)>> {
        let mut out: Vec<(String, Representation)> = (0..3)
            .map(|k| (format!("trivial{k}"), Representation::trivial(g.clone(), k)))
            .collect();
        if g.num_objects() == 1 {
            if g.num_arrows() > 1 {
                out.push(("sign".into(), sign(g.clone())?));
            }
            out.push(("regular".into(), regular(g.clone())?));
        }
        let salt = g.name().bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED ^ salt);
        for k in 0..RANDOM_WITNESSES {
            let rank = 1 + k % 3;
            out.push((format!("random{k}"), random_representation(g.clone(), rank, &mut rng)?));
        }
        Ok(out)
    }

    /// `{p0, p1}` between the point and the pair groupoid on `{0, 1}`:
    /// `phi(p_i) = i`, `p_i·(i,j) = p_j`.
    pub fn point_vs_pair(&self) -> PrincipalBibundle {
        let s = |v: &[(&str, &str)]| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let doc = BibundleDoc {
            name: Some("point_vs_pair".into()),
            left: "point".into(),
            right: "pair2".into(),
            points: vec!["p0".into(), "p1".into()],
            pi: s(&[("p0", "*"), ("p1", "*")]),
            phi: s(&[("p0", "0"), ("p1", "1")]),
            lact: vec![["e".into(), "p0".into(), "p0".into()], ["e".into(), "p1".into(), "p1".into()]],
            ract: (0..2)
                .flat_map(|i| (0..2).map(move |j| [format!("p{i}"), format!("({i},{j})"), format!("p{j}")]))
                .collect(),
        };
        PrincipalBibundle::from_doc(self.groupoid("point"), self.groupoid("pair2"), &doc)
            .expect("fixture bibundle")
    }

    /// The inclusion of the objects of `{0, 1}` into the pair groupoid.
    pub fn unit_into_pair(&self) -> (Functor, Arc<FiniteGroupoid>, Arc<FiniteGroupoid>) {
        let (unit, pair) = (self.groupoid("unit2"), self.groupoid("pair2"));
        let s = |v: &[(&str, &str)]| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let f = Functor::from_maps(
            &unit,
            &pair,
            &s(&[("0", "0"), ("1", "1")]),
            &s(&[("1_0", "(0,0)"), ("1_1", "(1,1)")]),
        )
        .expect("inclusion functor");
        (f, unit, pair)
    }

    /// The swap-action groupoid collapsed to the point.
    pub fn swap_to_point(&self) -> (Functor, Arc<FiniteGroupoid>, Arc<FiniteGroupoid>) {
        let (swap, point) = (self.groupoid("swap"), self.groupoid("point"));
        let f = Functor {
            on_objects: swap.objects().map(|_| point.objects().next().expect("one object")).collect(),
            on_arrows: swap.arrows().map(|_| point.arrows().next().expect("one arrow")).collect(),
        };
        (f, swap, point)
    }

    /// The sign homomorphism `S₃ → ℤ/2`.
    pub fn s3_sign(&self) -> Result<(Functor, Arc<FiniteGroupoid>, Arc<FiniteGroupoid>)> {
        let (s3, z2) = (self.groupoid("s3"), self.groupoid("z2"));
        let sgn = sign(s3.clone())?;
        let (e, s) = (z2.arrow("e")?, z2.arrow("s")?);
        let f = Functor {
            on_objects: vec![z2.objects().next().expect("one object")],
            on_arrows: s3
                .arrows()
                .map(|a| if sgn.rho(a).is_identity() { e } else { s })
                .collect(),
        };
        f.check(&s3, &z2)?;
        Ok((f, s3, z2))
    }

    /// Named sample bibundles: identities, the Morita equivalences
    /// `point ~ pair2` and `swap ~ point` in both directions, and the
    /// bundles of two functors that are not equivalences.
    pub fn bibundles(&self) -> Result<Vec<PrincipalBibundle>> {
        let mut out: Vec<PrincipalBibundle> = ["pair2", "z2", "swap"]
            .iter()
            .map(|n| PrincipalBibundle::identity(self.groupoid(n)).with_name(format!("id_{n}")))
            .collect();
        let pvp = self.point_vs_pair();
        out.push(pvp.opposite().with_name("pair_vs_point"));
        out.push(pvp);
        let (f, a, b) = self.swap_to_point();
        let stp = bundle_from_functor(&f, a, b)?.with_name("swap_to_point");
        out.push(stp.opposite().with_name("point_to_swap"));
        out.push(stp);
        let (f, a, b) = self.unit_into_pair();
        out.push(bundle_from_functor(&f, a, b)?.with_name("unit_into_pair"));
        let (f, a, b) = self.s3_sign()?;
        out.push(bundle_from_functor(&f, a, b)?.with_name("s3_to_z2"));
        Ok(out)
    }

    /// Four composable bibundles `point → pair2 → point → swap → point`.
    pub fn chain(&self) -> Result<[PrincipalBibundle; 4]> {
        let pvp = self.point_vs_pair();
        let (f, a, b) = self.swap_to_point();
        let stp = bundle_from_functor(&f, a, b)?.with_name("swap_to_point");
        Ok([
            pvp.clone(),
            pvp.opposite().with_name("pair_vs_point"),
            stp.opposite().with_name("point_to_swap"),
            stp,
        ])
    }
}
