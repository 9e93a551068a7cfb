//! Built-in systems: the heat equation, source-free Maxwell equations and
//! the electromagnetic potential equations, written in the system DSL.

use crate::dsl::parse_system;
use crate::operator::Presentation;

pub struct Builtin {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    /// Scheme names that resolve to a different preset for this system.
    pub scheme_aliases: &'static [(&'static str, &'static str)],
}

const DIFFUSION: &str = "\
# u_t = a u_xx
kind differential
operators x t
parameter a
unknowns u
relation t*u - a * x^2 * u
";

// p1..p3 = E, p4..p6 = H, p7..p9 = D, p10..p12 = B
const MAXWELL: &str = "\
# div D = div B = 0, curl E + B_t = 0, curl H - D_t = 0
kind differential
operators x y z t
unknowns p1 p2 p3 p4 p5 p6 p7 p8 p9 p10 p11 p12
relation x*p7 + y*p8 + z*p9
relation x*p10 + y*p11 + z*p12
relation y*p3 - z*p2 + t*p10
relation y*p6 - z*p5 - t*p7
relation z*p1 - x*p3 + t*p11
relation z*p4 - x*p6 - t*p8
relation x*p2 - y*p1 + t*p12
relation x*p5 - y*p4 - t*p9
";

const POTENTIAL: &str = "\
# sum_j d_j e_j = 0 and sum_j (d_j^2 e_i - d_i d_j e_j) = 0 for each i
kind differential
operators x1 x2 x3 x4
unknowns e1 e2 e3 e4
relation x1*e1 + x2*e2 + x3*e3 + x4*e4
relation x2^2*e1 + x3^2*e1 + x4^2*e1 - x1*x2*e2 - x1*x3*e3 - x1*x4*e4
relation x1^2*e2 + x3^2*e2 + x4^2*e2 - x2*x1*e1 - x2*x3*e3 - x2*x4*e4
relation x1^2*e3 + x2^2*e3 + x4^2*e3 - x3*x1*e1 - x3*x2*e2 - x3*x4*e4
relation x1^2*e4 + x2^2*e4 + x3^2*e4 - x4*x1*e1 - x4*x2*e2 - x4*x3*e3
";

pub const BUILTINS: [Builtin; 3] = [
    Builtin {
        name: "diffusion",
        description: "one-dimensional diffusion equation u_t = a*u_xx",
        source: DIFFUSION,
        scheme_aliases: &[("symmetric", "symmetric-space-forward-time")],
    },
    Builtin {
        name: "maxwell",
        description: "Maxwell equations without free charges or currents (12 unknowns)",
        source: MAXWELL,
        scheme_aliases: &[],
    },
    Builtin {
        name: "potential",
        description: "electromagnetic field given by its potential (4 unknowns)",
        source: POTENTIAL,
        scheme_aliases: &[],
    },
];

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|b| b.name)
}

impl Builtin {
    pub fn presentation(&self) -> Presentation {
        parse_system(self.source).expect("built-in sources parse").presentation
    }

    /// The preset a scheme name stands for when applied to this system.
    pub fn resolve_scheme<'a>(&self, scheme: &'a str) -> &'a str {
        self.scheme_aliases
            .iter()
            .find(|(from, _)| *from == scheme)
            .map_or(scheme, |(_, to)| to)
    }
}

/// The presentation of a built-in system by name.
pub fn builtin_system(name: &str) -> Option<Presentation> {
    builtin(name).map(Builtin::presentation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::render_system;
    use crate::operator::SystemKind;

    #[test]
    fn shapes() {
        let d = builtin_system("diffusion").unwrap();
        assert_eq!((d.operator_count(), d.generator_count(), d.relations.len()), (2, 1, 1));
        assert_eq!(d.parameter.as_deref(), Some("a"));
        let m = builtin_system("maxwell").unwrap();
        assert_eq!((m.operator_count(), m.generator_count(), m.relations.len()), (4, 12, 8));
        let p = builtin_system("potential").unwrap();
        assert_eq!((p.operator_count(), p.generator_count(), p.relations.len()), (4, 4, 5));
        assert!(builtin_system("navier-stokes").is_none());
        for b in &BUILTINS {
            let p = b.presentation();
            assert_eq!(p.kind, SystemKind::Differential);
            p.validate().unwrap();
        }
    }

    #[test]
    fn potential_relations_have_the_expected_size() {
        // the j = i summand cancels, leaving three squares and three mixed terms
        let p = builtin_system("potential").unwrap();
        assert_eq!(p.relations[0].len(), 4);
        assert!(p.relations[1..].iter().all(|r| r.len() == 6));
    }

    #[test]
    fn canonical_round_trip() {
        for b in &BUILTINS {
            let p = b.presentation();
            let text = render_system(&p);
            let again = parse_system(&text).unwrap().presentation;
            assert_eq!(again, p, "{}", b.name);
            assert_eq!(render_system(&again), text);
        }
    }

    #[test]
    fn scheme_aliases() {
        let d = builtin("diffusion").unwrap();
        assert_eq!(d.resolve_scheme("symmetric"), "symmetric-space-forward-time");
        assert_eq!(d.resolve_scheme("forward"), "forward");
        assert_eq!(builtin("maxwell").unwrap().resolve_scheme("symmetric"), "symmetric");
    }
}
