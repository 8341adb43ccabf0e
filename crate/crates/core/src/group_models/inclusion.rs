//! Subgroup inclusions j: G0 -> G of open normal subgroups, the induced map
//! X(j) on conjugacy classes, coset-representative actions, and fusion fibers.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::Arc;

use super::{builtin_model, ClassPoint, GroupModel};
use crate::error::{Error, Result};

type PointMap = Arc<dyn Fn(&ClassPoint) -> ClassPoint + Send + Sync>;
type PartialPointMap = Arc<dyn Fn(&ClassPoint) -> Option<ClassPoint> + Send + Sync>;

const TAU: f64 = 2.0 * PI;

/// An open (normal) subgroup inclusion with the data needed to fuse classes,
/// compute fibers of X(j), and induce characters.
#[derive(Clone)]
pub struct SubgroupInclusion {
    pub name: String,
    pub sub: Arc<GroupModel>,
    pub amb: Arc<GroupModel>,
    pub index: usize,
    /// Conjugation action of each coset representative on X(G0); the first
    /// entry is the identity.
    coset_actions: Vec<PointMap>,
    embed_fn: PointMap,
    preimage_fn: PartialPointMap,
    /// Ambient components lying in the image of X(j).
    pub image_components: BTreeSet<String>,
    pub normal: bool,
}

impl SubgroupInclusion {
    pub fn coset_rep_count(&self) -> usize {
        self.coset_actions.len()
    }

    /// Action of coset representative i on a class of G0.
    pub fn act(&self, i: usize, y: &ClassPoint) -> Result<ClassPoint> {
        self.sub.validate_point(y)?;
        let moved = (self.coset_actions[i])(y);
        self.sub.canonicalize(&moved)
    }

    /// X(j): the canonical G-class of a G0-class. Constant on fusion orbits.
    pub fn fuse_class(&self, y: &ClassPoint) -> Result<ClassPoint> {
        self.sub.validate_point(y)?;
        let image = (self.embed_fn)(y);
        self.amb.canonicalize(&image)
    }

    pub fn in_image(&self, x: &ClassPoint) -> bool {
        self.image_components.contains(&x.component)
    }

    /// Some preimage of x under X(j), if x lies in the image.
    pub fn preimage(&self, x: &ClassPoint) -> Result<Option<ClassPoint>> {
        self.amb.validate_point(x)?;
        Ok((self.preimage_fn)(x))
    }

    /// The fiber of X(j) over x: the orbit of any preimage under the
    /// coset-representative actions, as distinct G0-classes.
    pub fn fusion_fiber(&self, x: &ClassPoint) -> Result<Vec<ClassPoint>> {
        self.amb.validate_point(x)?;
        let y = (self.preimage_fn)(x).ok_or_else(|| Error::NotInImage(self.name.clone()))?;
        let mut fiber: Vec<ClassPoint> = Vec::new();
        for i in 0..self.coset_actions.len() {
            let moved = self.act(i, &y)?;
            if !fiber.iter().any(|z| same_class(z, &moved)) {
                fiber.push(moved);
            }
        }
        Ok(fiber)
    }
}

fn same_class(a: &ClassPoint, b: &ClassPoint) -> bool {
    a.component == b.component
        && a.angles.len() == b.angles.len()
        && a.angles
            .iter()
            .zip(&b.angles)
            .all(|(&s, &t)| (s - t).abs() < 1e-9)
}

/// The identity inclusion G = G, index 1.
pub fn identity_inclusion(model: Arc<GroupModel>) -> SubgroupInclusion {
    let id: PointMap = Arc::new(|y: &ClassPoint| y.clone());
    SubgroupInclusion {
        name: format!("{0}<{0}", model.name),
        sub: model.clone(),
        amb: model.clone(),
        index: 1,
        coset_actions: vec![id.clone()],
        embed_fn: id,
        preimage_fn: Arc::new(|x: &ClassPoint| Some(x.clone())),
        image_components: model.components.labels().iter().cloned().collect(),
        normal: true,
    }
}

/// U(1) inside its normalizer in SU(2); the reflection coset acts on U(1)
/// classes by t -> -t.
pub fn u1_in_nu1() -> Result<SubgroupInclusion> {
    let sub = builtin_model("U1")?;
    let amb = builtin_model("N_U1")?;
    let identity: PointMap = Arc::new(|y: &ClassPoint| y.clone());
    let reflect: PointMap = Arc::new(|y: &ClassPoint| {
        ClassPoint::new("id", vec![(TAU - y.angles[0]).rem_euclid(TAU)])
    });
    let embed: PointMap = Arc::new(|y: &ClassPoint| {
        let t = y.angles[0].rem_euclid(TAU);
        ClassPoint::new("id", vec![t.min(TAU - t)])
    });
    let preimage: PartialPointMap = Arc::new(|x: &ClassPoint| {
        (x.component == "id").then(|| ClassPoint::new("id", vec![x.angles[0]]))
    });
    Ok(SubgroupInclusion {
        name: "U1<N_U1".into(),
        sub,
        amb,
        index: 2,
        coset_actions: vec![identity, reflect],
        embed_fn: embed,
        preimage_fn: preimage,
        image_components: ["id".to_string()].into_iter().collect(),
        normal: true,
    })
}

/// SO(3) inside SO(3) ⊔ (-Id)·SO(3). The -Id coset is central, so its
/// conjugation action on classes is trivial and every fiber is a singleton.
pub fn so3_in_o3() -> Result<SubgroupInclusion> {
    let sub = builtin_model("SO3")?;
    let amb = builtin_model("O3_CANDIDATE")?;
    let identity: PointMap = Arc::new(|y: &ClassPoint| y.clone());
    let embed: PointMap =
        Arc::new(|y: &ClassPoint| ClassPoint::new("id", y.angles.clone()));
    let preimage: PartialPointMap = Arc::new(|x: &ClassPoint| {
        (x.component == "id").then(|| ClassPoint::new("id", x.angles.clone()))
    });
    Ok(SubgroupInclusion {
        name: "SO3<O3_CANDIDATE".into(),
        sub,
        amb,
        index: 2,
        coset_actions: vec![identity.clone(), identity],
        embed_fn: embed,
        preimage_fn: preimage,
        image_components: ["id".to_string()].into_iter().collect(),
        normal: true,
    })
}

/// Named lookup for the built-in inclusions (plus identity inclusions).
pub fn builtin_inclusion(sub: &str, amb: &str) -> Result<SubgroupInclusion> {
    match (sub, amb) {
        ("U1", "N_U1") => u1_in_nu1(),
        ("SO3", "O3_CANDIDATE") => so3_in_o3(),
        (s, a) if s == a => Ok(identity_inclusion(builtin_model(s)?)),
        _ => Err(Error::Contract(format!(
            "no built-in inclusion {sub} < {amb}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reflection_fusion_identifies_theta_and_minus_theta() {
        let incl = u1_in_nu1().unwrap();
        let a = incl
            .fuse_class(&ClassPoint::new("id", vec![PI / 3.0]))
            .unwrap();
        let b = incl
            .fuse_class(&ClassPoint::new("id", vec![5.0 * PI / 3.0]))
            .unwrap();
        assert!(same_class(&a, &b));
        assert_abs_diff_eq!(a.angles[0], PI / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn fuse_identity_class() {
        let incl = u1_in_nu1().unwrap();
        let x = incl.fuse_class(&ClassPoint::new("id", vec![0.0])).unwrap();
        assert!(same_class(&x, &incl.amb.identity_class()));
    }

    #[test]
    fn identity_inclusion_fuses_trivially() {
        let incl = identity_inclusion(builtin_model("SU2").unwrap());
        let y = ClassPoint::new("id", vec![1.234]);
        assert!(same_class(&incl.fuse_class(&y).unwrap(), &y));
        assert_eq!(incl.fusion_fiber(&y).unwrap().len(), 1);
    }

    #[test]
    fn nu1_fiber_of_regular_class_has_two_elements() {
        let incl = u1_in_nu1().unwrap();
        let fiber = incl
            .fusion_fiber(&ClassPoint::new("id", vec![PI / 3.0]))
            .unwrap();
        assert_eq!(fiber.len(), 2);
        let mut angles: Vec<f64> = fiber.iter().map(|y| y.angles[0]).collect();
        angles.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(angles[0], PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(angles[1], 5.0 * PI / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn nu1_fiber_of_central_class_is_singleton() {
        let incl = u1_in_nu1().unwrap();
        let fiber = incl
            .fusion_fiber(&ClassPoint::new("id", vec![0.0]))
            .unwrap();
        assert_eq!(fiber.len(), 1);
    }

    #[test]
    fn reflection_component_is_not_in_image() {
        let incl = u1_in_nu1().unwrap();
        let x = ClassPoint::new("refl", vec![]);
        assert!(!incl.in_image(&x));
        assert!(matches!(
            incl.fusion_fiber(&x),
            Err(Error::NotInImage(_))
        ));
    }

    #[test]
    fn o3_fibers_are_singletons() {
        let incl = so3_in_o3().unwrap();
        let fiber = incl
            .fusion_fiber(&ClassPoint::new("id", vec![0.7]))
            .unwrap();
        assert_eq!(fiber.len(), 1);
    }
}
