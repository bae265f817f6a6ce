use ucg_core::algebra::random::{gaussian_matrix, random_element_with, random_unit_vector, random_unitary_with, seeded_rng, SeededRng};
use ucg_core::algebra::{exp_i_hermitian, pauli, phase_permutation_group, AlgebraDescriptor, AlgebraElement};
use ucg_core::convolution::{
    build_orbit_groupoid, convolve, i_norm, involution, iota_fixed_subalgebra, naive_multiplicativity_defect,
    regular_representation_norm, FiniteGroupoid, GroupoidFunction,
};
use ucg_core::embedding::{
    commutativity_report, conditional_expectation_value, fredholm_index, kernel_bundle_defect, sample_projective, FiberSample,
};
use ucg_core::groupoid::{act, arrow_compose, arrow_inverse, haar_system_build, point_residual, verify_left_invariance, Arrow};
use ucg_core::models::{
    character_extension_failure, commutative_action_residual, compacts_masa_conjugacy, enumerate_partitions, extend_by_zero_embedding,
    gelfand_recovery_check, jacobson_closure, kuratowski_check, lattice_points, FinitePartition, PrimitiveIdealSpace,
};
use ucg_core::scalar::{c, outer, spectral_norm, CMatrix, CVector};
use ucg_core::subalgebra::{evaluate_character, fell_converges, fell_gap, Character, CommutativeSubalgebra};
use ucg_core::unitspace::{point_from_vector, psi_projective, unit_metric, UnitPoint};
use ucg_core::{Error, Result, Tolerances};

use rand::Rng;
use std::sync::Arc;

use crate::report::{num, Check, Report, Table};
use crate::RunConfig;

/// Runs one check; a core error becomes a failed check carrying the message.
fn guard(report: &mut Report, name: &str, f: impl FnOnce() -> Result<(bool, Option<f64>, String)>) {
    let check = match f() {
        Ok((passed, value, detail)) => Check::new(name, passed, value, detail),
        Err(e) => Check::new(name, false, None, format!("error: {e}")),
    };
    report.check(check);
}

fn random_values(rng: &mut SeededRng, n: usize) -> Vec<num_complex::Complex<f64>> {
    (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn diagonal_groupoid(n: usize, r: u32, tol: &Tolerances) -> Result<Arc<FiniteGroupoid<f64>>> {
    let desc = AlgebraDescriptor::matrix(n)?;
    let haar = haar_system_build(phase_permutation_group(n, r, crate::MAX_GROUP)?, tol)?;
    let seed = UnitPoint::on_block(CommutativeSubalgebra::diagonal(desc, tol), 0, tol)?;
    build_orbit_groupoid(haar, &[seed], tol)
}

fn random_arrow(gpd: &FiniteGroupoid<f64>, rng: &mut SeededRng, source: usize) -> (Arrow<f64>, usize) {
    let g = rng.random_range(0..gpd.group_order());
    (gpd.arrow(gpd.arrow_id(g, source)), gpd.act_index(g, source))
}

pub fn matrix(cfg: &RunConfig, report: &mut Report) {
    let (n, r, m, tol) = (cfg.n, cfg.r, cfg.samples, cfg.tolerances);
    report.param("n", n);
    report.param("r", r);
    let desc = AlgebraDescriptor::matrix(n).expect("validated size");
    let mut rng = seeded_rng(cfg.seed);

    guard(report, "psi_projective", || {
        let mut worst = 0.0f64;
        for _ in 0..m {
            let v: CVector<f64> = random_unit_vector(&mut rng, n);
            let x = point_from_vector(&v, desc, &tol)?;
            let p = psi_projective(&x, &tol)?;
            worst = worst.max(spectral_norm(&(p.matrix() - outer(&v, &v))));
        }
        Ok((worst < tol.tau_eq, Some(worst), "Psi[v] = vv*".into()))
    });

    guard(report, "conjugation_action", || {
        let mut worst = 0.0f64;
        let mut ok = true;
        let one = AlgebraElement::identity(desc);
        for _ in 0..m {
            let v = random_unit_vector(&mut rng, n);
            let x = point_from_vector(&v, desc, &tol)?;
            let u = random_unitary_with::<f64, _>(desc, &mut rng);
            let w = random_unitary_with::<f64, _>(desc, &mut rng);
            ok &= act(&one, &x, &tol)?.same_as(&x, &tol);
            let lhs = act(&u.mul(&w)?, &x, &tol)?;
            let rhs = act(&u, &act(&w, &x, &tol)?, &tol)?;
            ok &= lhs.same_as(&rhs, &tol);
            worst = worst.max(point_residual(&lhs, &rhs));
        }
        Ok((ok, Some(worst), "act(1,x) = x, act(uw,x) = act(u,act(w,x))".into()))
    });

    let gpd = match diagonal_groupoid(n, r, &tol) {
        Ok(g) => g,
        Err(e) => {
            report.check(Check::new("groupoid_build", false, None, format!("error: {e}")));
            return;
        }
    };
    report.param("group_order", gpd.group_order());
    report.param("points", gpd.point_count());

    guard(report, "groupoid_axioms", || {
        let mut ok = true;
        for _ in 0..m {
            let p = rng.random_range(0..gpd.point_count());
            let (a1, p1) = random_arrow(&gpd, &mut rng, p);
            let (a2, p2) = random_arrow(&gpd, &mut rng, p1);
            let (a3, _) = random_arrow(&gpd, &mut rng, p2);
            let left = arrow_compose(&a3, &arrow_compose(&a2, &a1, &tol)?, &tol)?;
            let right = arrow_compose(&arrow_compose(&a3, &a2, &tol)?, &a1, &tol)?;
            ok &= left.same_as(&right, &tol);
            let unit = Arrow::unit(&a1.range(&tol));
            ok &= arrow_compose(&unit, &a1, &tol)?.same_as(&a1, &tol);
            ok &= arrow_compose(&arrow_inverse(&a1, &tol), &a1, &tol)?.is_unit(&tol);
        }
        Ok((ok, None, format!("{m} composable triples")))
    });

    guard(report, "haar_left_invariance", || {
        let mut ok = true;
        for id in 0..gpd.arrow_count() {
            ok &= verify_left_invariance(gpd.group(), &gpd.arrow(id), &tol)?;
        }
        Ok((ok, None, format!("{} arrows", gpd.arrow_count())))
    });

    guard(report, "convolution_cstar", || {
        let (mut assoc, mut inv, mut cstar) = (0.0f64, 0.0f64, 0.0f64);
        let mut bounded = true;
        for _ in 0..m.min(32) {
            let f = GroupoidFunction::random(&gpd, &mut rng);
            let g = GroupoidFunction::random(&gpd, &mut rng);
            let h = GroupoidFunction::random(&gpd, &mut rng);
            assoc = assoc.max(convolve(&convolve(&f, &g)?, &h)?.distance(&convolve(&f, &convolve(&g, &h)?)?)?);
            inv = inv.max(involution(&convolve(&f, &g)?).distance(&convolve(&involution(&g), &involution(&f))?)?);
            let nf = regular_representation_norm(&f);
            bounded &= nf <= i_norm(&f) * (1.0 + tol.tau_eq);
            let nff = regular_representation_norm(&convolve(&involution(&f), &f)?);
            cstar = cstar.max((nff - nf * nf).abs() / (nf * nf));
        }
        let ok = assoc < 1e-9 && inv < 1e-9 && cstar < 1e-8 && bounded;
        Ok((ok, Some(assoc.max(inv)), format!("c_star_relative={} norm_bounded_by_i_norm={bounded}", num(cstar))))
    });

    guard(report, "iota_diagonal", || {
        let dn = CommutativeSubalgebra::diagonal(desc, &tol);
        let (mut hom, mut norm) = (0.0f64, 0.0f64);
        for _ in 0..m {
            let b1 = dn.element_from_values(&random_values(&mut rng, n))?;
            let b2 = dn.element_from_values(&random_values(&mut rng, n))?;
            let i1 = iota_fixed_subalgebra(&b1, &dn, &gpd, &tol)?;
            let i2 = iota_fixed_subalgebra(&b2, &dn, &gpd, &tol)?;
            let i12 = iota_fixed_subalgebra(&b1.mul(&b2)?, &dn, &gpd, &tol)?;
            hom = hom.max(i12.distance(&convolve(&i1, &i2)?)?);
            let top = (0..n).map(|i| b1.matrix()[(i, i)].norm()).fold(0.0, f64::max);
            norm = norm.max((regular_representation_norm(&i1) - top).abs());
        }
        Ok((hom < 1e-10 && norm < 1e-9, Some(hom), format!("norm_defect={}", num(norm))))
    });

    guard(report, "naive_evaluation_failure", || {
        if n < 2 {
            return Ok((true, None, "not applicable for n = 1".into()));
        }
        let e12 = AlgebraElement::matrix_unit(desc, 0, 1)?;
        let e21 = AlgebraElement::matrix_unit(desc, 1, 0)?;
        let (defect, size) = naive_multiplicativity_defect(&e12, &e21, &gpd, &tol)?;
        let p1 = gpd.points().iter().position(|x| x.block() == 0).ok_or(Error::MissingCharacters)?;
        let at = defect.value(gpd.group().identity(), p1).norm();
        Ok((at == 1.0, Some(size), format!("defect at (D_n, chi_1) = {}", num(at))))
    });

    let sample = match sample_projective::<f64>(n, m, cfg.seed) {
        Ok(s) => s,
        Err(e) => {
            report.check(Check::new("fiber_sample", false, None, format!("error: {e}")));
            return;
        }
    };

    guard(report, "conditional_expectation", || {
        let mut worst = 0.0f64;
        for v in sample.vectors() {
            let x = point_from_vector(v, desc, &tol)?;
            let a = x.subalgebra().element_from_values(&random_values(&mut rng, n))?;
            let lhs = conditional_expectation_value(&a, v, &tol)?;
            let rhs = evaluate_character(x.subalgebra(), x.character(), &a, &tol)?;
            worst = worst.max((lhs - rhs).norm());
        }
        Ok((worst < 1e-12, Some(worst), "<v,Av> = chi_v(A) on B_v".into()))
    });

    let mut plot = Table::new("expectation", &["sample", "bloch_x", "bloch_y", "bloch_z", "value_re", "value_im"]);
    let a = random_element_with::<f64, _>(desc, &mut rng);
    for (i, v) in sample.vectors().iter().enumerate() {
        let value = conditional_expectation_value(&a, v, &tol).unwrap_or(c(f64::NAN, f64::NAN));
        let (bx, by, bz) = if n == 2 {
            let z = v[0].conj() * v[1];
            (2.0 * z.re, 2.0 * z.im, v[0].norm_sqr() - v[1].norm_sqr())
        } else {
            (f64::NAN, f64::NAN, f64::NAN)
        };
        plot.push(vec![i.to_string(), num(bx), num(by), num(bz), num(value.re), num(value.im)]);
    }

    guard(report, "commutativity", || {
        let rep = commutativity_report(desc, &sample, &tol)?;
        let expected = n == 1;
        let witnessed = expected || (rep.diagonal_witness.is_some() && rep.noncommuting_unitaries.is_some());
        Ok((rep.commutative == expected && witnessed, None, format!("commutative={} checked={}", rep.commutative, rep.checked.join("; "))))
    });

    guard(report, "fredholm_index", || {
        let mut ok = true;
        let mut worst = 0.0f64;
        for _ in 0..m {
            let rank = rng.random_range(0..=n);
            let t = AlgebraElement::new(desc, gaussian_matrix(&mut rng, n, rank) * gaussian_matrix(&mut rng, rank, n), &tol)?;
            let rep = fredholm_index(&t, &tol)?;
            ok &= rep.index == 0;
            worst = worst.max(kernel_bundle_defect(&t, &sample, &tol)?);
        }
        Ok((ok && worst < 1e-10, Some(worst), "index 0, kernel bundle constant".into()))
    });

    report.tables.push(plot);
}

fn bell(k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 1..k {
        let mut next = vec![*row.last().expect("non-empty")];
        for &x in &row {
            next.push(next.last().expect("non-empty") + x);
        }
        row = next;
    }
    *row.last().expect("non-empty")
}

pub fn commutative(cfg: &RunConfig, report: &mut Report) {
    let (k, m, tol) = (cfg.k, cfg.samples, cfg.tolerances);
    report.param("k", k);
    let desc = AlgebraDescriptor::commutative(k).expect("validated size");
    let mut rng = seeded_rng(cfg.seed);

    guard(report, "partition_lattice", || {
        let count = enumerate_partitions(k)?.len();
        Ok((count == bell(k), Some(count as f64), format!("Bell({k}) = {}", bell(k))))
    });

    let points = match lattice_points::<f64>(k, &tol) {
        Ok(p) => p,
        Err(e) => {
            report.check(Check::new("lattice_points", false, None, format!("error: {e}")));
            return;
        }
    };
    report.param("unit_points", points.len());

    guard(report, "gelfand_recovery", || {
        let residual = gelfand_recovery_check::<f64>(k, &tol)?;
        Ok((residual == 0.0, Some(residual), "readback on the finest component".into()))
    });

    guard(report, "extend_by_zero_homomorphism", || {
        let mut ok = true;
        for _ in 0..m.min(16) {
            let f = random_element_with::<f64, _>(desc, &mut rng);
            let g = random_element_with::<f64, _>(desc, &mut rng);
            let vf = extend_by_zero_embedding(&f, &points, &tol)?;
            let vg = extend_by_zero_embedding(&g, &points, &tol)?;
            let vfg = extend_by_zero_embedding(&f.mul(&g)?, &points, &tol)?;
            let vsum = extend_by_zero_embedding(&f.add(&g)?, &points, &tol)?;
            let vadj = extend_by_zero_embedding(&f.adjoint(), &points, &tol)?;
            for i in 0..points.len() {
                ok &= vfg[i] == vf[i] * vg[i] && vsum[i] == vf[i] + vg[i] && vadj[i] == vf[i].conj();
            }
        }
        Ok((ok, None, "products, sums and adjoints match exactly".into()))
    });

    guard(report, "character_extension_failure", || match character_extension_failure::<f64>(k, &FinitePartition::coarsest(k)) {
        Ok(w) => Ok((
            w.first_value != w.second_value && w.defect > 0.0,
            Some(w.defect),
            format!("g(x{}) = {}, g(x{}) = {}", w.first + 1, num(w.first_value.re), w.second + 1, num(w.second_value.re)),
        )),
        Err(Error::NoCoarseBlock) if k == 1 => Ok((true, None, "k = 1 has no coarse block".into())),
        Err(e) => Err(e),
    });

    guard(report, "trivial_action", || {
        let (fixed, worst) = commutative_action_residual::<f64>(k, m.min(16), cfg.seed, &tol)?;
        Ok((fixed, Some(worst), "act(u,x) = x for diagonal unitaries".into()))
    });

    guard(report, "commutativity", || {
        let rep = commutativity_report(desc, &FiberSample::for_descriptor(desc, 4, cfg.seed)?, &tol)?;
        Ok((rep.commutative, None, format!("checked={}", rep.checked.join("; "))))
    });

    guard(report, "discrete_primitive_ideals", || {
        let space = PrimitiveIdealSpace::discrete(k)?;
        let mut ok = kuratowski_check(&space)?.passed();
        for l in space.labels() {
            ok &= jacobson_closure(&space, &[l.as_str()])? == vec![l.clone()];
        }
        Ok((ok, None, "every point closed".into()))
    });
}

pub fn compacts(cfg: &RunConfig, report: &mut Report) {
    let (nn, m, tol) = (cfg.big_n, cfg.samples, cfg.tolerances);
    report.param("N", nn);
    let desc = AlgebraDescriptor::truncated_compacts(nn).expect("validated size");
    let mut rng = seeded_rng(cfg.seed);
    let diag = CommutativeSubalgebra::diagonal(desc, &tol);

    guard(report, "character_formulas", || {
        let mut worst = 0.0f64;
        for _ in 0..m {
            let lambda = random_values(&mut rng, 1)[0];
            let d = random_values(&mut rng, nn);
            let k = CMatrix::from_diagonal(&CVector::from_vec(d.clone()));
            let a = AlgebraElement::compact_perturbation(desc, lambda, &k)?;
            for chi in diag.characters() {
                let got = evaluate_character(&diag, chi, &a, &tol)?;
                let b = diag.block_of(chi)?;
                let expected = match chi {
                    Character::Infinity => lambda,
                    Character::Block(_) => {
                        let i = (0..nn).find(|&i| diag.projections()[b][(i, i)].re > 0.5).ok_or(Error::MissingCharacters)?;
                        lambda + d[i]
                    }
                };
                worst = worst.max((got - expected).norm());
            }
        }
        Ok((worst < 1e-12, Some(worst), "chi_n = lambda + D_nn, chi_inf = lambda".into()))
    });

    guard(report, "masa_conjugacy", || {
        let r = compacts_masa_conjugacy::<f64>(nn, m, cfg.seed, &tol)?;
        Ok((r.passed(), None, format!("maximal={} sizes={} infinity={}", r.all_maximal, r.sizes_preserved, r.infinity_preserved)))
    });

    guard(report, "infinity_character_fixed", || {
        let inf = diag.block_of(Character::Infinity)?;
        let x = UnitPoint::on_block(diag.clone(), inf, &tol)?;
        let mut ok = matches!(psi_projective(&x, &tol), Err(Error::NoProjection));
        for _ in 0..m {
            let u = random_unitary_with::<f64, _>(desc, &mut rng);
            ok &= act(&u, &x, &tol)?.character() == Character::Infinity;
        }
        Ok((ok, None, "chi_inf is fixed by every unitary and has no projection".into()))
    });

    guard(report, "fredholm_index", || {
        let sample = FiberSample::for_descriptor(desc, 4, cfg.seed)?;
        let mut ok = true;
        let mut worst = 0.0f64;
        for _ in 0..m {
            let rank = rng.random_range(0..=nn);
            let k = gaussian_matrix(&mut rng, nn, rank) * gaussian_matrix(&mut rng, rank, nn);
            let t = AlgebraElement::compact_perturbation(desc, c(1.0, 0.0), &k)?;
            ok &= fredholm_index(&t, &tol)?.index == 0;
            worst = worst.max(kernel_bundle_defect(&t, &sample, &tol)?);
        }
        Ok((ok && worst < 1e-10, Some(worst), "I + finite rank has index 0".into()))
    });

    guard(report, "commutativity", || {
        let rep = commutativity_report(desc, &FiberSample::for_descriptor(desc, 4, cfg.seed)?, &tol)?;
        Ok((rep.commutative == (nn == 1), None, format!("commutative={}", rep.commutative)))
    });

    let mut prim = Table::new("prim", &["subset", "closure"]);
    guard(report, "jacobson_closure", || {
        let space = PrimitiveIdealSpace::compacts_model();
        let zero = jacobson_closure(&space, &["0"])?;
        let k = jacobson_closure(&space, &["K"])?;
        prim.push(vec!["{0}".into(), format!("{{{}}}", zero.join(", "))]);
        prim.push(vec!["{K}".into(), format!("{{{}}}", k.join(", "))]);
        Ok((zero == ["0", "K"] && k == ["K"], None, format!("closure({{0}}) = {{{}}} (whole space)", zero.join(", "))))
    });
    report.tables.push(prim);
}

pub fn fell(cfg: &RunConfig, report: &mut Report) {
    let (steps, tol) = (cfg.samples, cfg.tolerances);
    let threshold = 1e-6;
    report.param("steps", steps);
    report.param("threshold", num(threshold));
    let desc = AlgebraDescriptor::matrix(2).expect("M_2");
    let d2 = CommutativeSubalgebra::<f64>::diagonal(desc, &tol);
    let mut table = Table::new("fell", &["m", "epsilon", "gap", "sin_2epsilon"]);
    guard(report, "fell_convergence", || {
        let sx = pauli::<f64>('x');
        let mut sequence = Vec::with_capacity(steps);
        let mut oracle = 0.0f64;
        for m in 1..=steps {
            let eps = 2f64.powi(-(m as i32));
            let u = exp_i_hermitian(&sx, eps, &tol)?;
            let b = ucg_core::subalgebra::conjugate_subalgebra(&u, &d2, &tol)?;
            let gap = fell_gap(&b, &d2)?;
            oracle = oracle.max((gap - (2.0 * eps).sin()).abs());
            table.push(vec![m.to_string(), num(eps), num(gap), num((2.0 * eps).sin())]);
            sequence.push(b);
        }
        let rep = fell_converges(&sequence, &d2, threshold)?;
        let last = *rep.gaps.last().expect("non-empty");
        Ok((
            rep.monotone && last < threshold,
            Some(last),
            format!("monotone={} final_below_threshold={} max_oracle_defect={}", rep.monotone, last < threshold, num(oracle)),
        ))
    });
    report.tables.push(table);
}

pub fn metric_table(cfg: &RunConfig, report: &mut Report) {
    let (n, m, tol) = (cfg.n, cfg.samples, cfg.tolerances);
    report.param("n", n);
    let desc = AlgebraDescriptor::matrix(n).expect("validated size");
    let mut rng = seeded_rng(cfg.seed);
    let mut table = Table::new("metric", &["pair", "unit_metric", "projective_distance"]);
    guard(report, "metric_axioms", || {
        let draw = |rng: &mut SeededRng| -> Result<(UnitPoint<f64>, CVector<f64>)> {
            let v = random_unit_vector(rng, n);
            Ok((point_from_vector(&v, desc, &tol)?, v))
        };
        let mut ok = true;
        let mut worst_symmetry = 0.0f64;
        let mut prev: Option<UnitPoint<f64>> = None;
        for i in 0..m {
            let (x, v) = draw(&mut rng)?;
            let (y, w) = draw(&mut rng)?;
            let dxy = unit_metric(&x, &y, &tol)?;
            let dyx = unit_metric(&y, &x, &tol)?;
            worst_symmetry = worst_symmetry.max((dxy - dyx).abs());
            ok &= unit_metric(&x, &x, &tol)? == 0.0 && dxy > 0.0;
            if let Some(z) = &prev {
                ok &= unit_metric(z, &y, &tol)? <= unit_metric(z, &x, &tol)? + dxy + tol.tau_eq;
            }
            let proj = spectral_norm(&(outer(&v, &v) - outer(&w, &w)));
            table.push(vec![i.to_string(), num(dxy), num(proj)]);
            prev = Some(x);
        }
        Ok((ok && worst_symmetry == 0.0, Some(worst_symmetry), "identity, positivity, symmetry, triangle".into()))
    });
    report.tables.push(table);
}

pub fn prim_closure(cfg: &RunConfig, report: &mut Report) {
    report.param("k", cfg.k);
    let mut table = Table::new("closures", &["space", "subset", "closure"]);
    let spaces = [("compacts", Ok(PrimitiveIdealSpace::compacts_model())), ("discrete", PrimitiveIdealSpace::discrete(cfg.k))];
    for (name, space) in spaces {
        guard(report, &format!("kuratowski_{name}"), || {
            let space = space?;
            for mask in 0u32..(1 << space.len()) {
                let subset = space.labels_of(mask);
                let refs: Vec<&str> = subset.iter().map(String::as_str).collect();
                let closure = jacobson_closure(&space, &refs)?;
                table.push(vec![name.into(), format!("{{{}}}", subset.join(", ")), format!("{{{}}}", closure.join(", "))]);
            }
            Ok((kuratowski_check(&space)?.passed(), None, format!("{} ideals", space.len())))
        });
    }
    guard(report, "compacts_closure", || {
        let space = PrimitiveIdealSpace::compacts_model();
        let ok = jacobson_closure(&space, &["0"])? == ["0", "K"] && jacobson_closure(&space, &["K"])? == ["K"];
        Ok((ok, None, "closure({0}) = {0, K}, closure({K}) = {K}".into()))
    });
    report.tables.push(table);
}
