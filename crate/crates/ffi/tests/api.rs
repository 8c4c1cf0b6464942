use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gogrow_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gg_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn equilibria_and_thresholds() {
    let (mut zero, mut pos) = (f64::NAN, f64::NAN);
    assert_eq!(unsafe { gg_equilibria(4.0, &mut zero, &mut pos) }, GgStatus::Ok);
    assert_eq!(zero, 0.0);
    assert!((pos - 0.2).abs() < 1e-15);
    assert!(last_error().is_empty());

    let mut rho = 0.0;
    assert_eq!(unsafe { gg_rho_crit(1, &mut rho) }, GgStatus::Ok);
    assert!(rho > 0.0);
    assert_eq!(unsafe { gg_rho_crit(0, &mut rho) }, GgStatus::InvalidInput);
    assert!(!last_error().is_empty());

    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { gg_c_curve(2, 3.5 * std::f64::consts::PI, &mut a, &mut b) }, GgStatus::Ok);
    assert!(a.is_finite() && b.is_finite());

    let mut count = 0usize;
    assert_eq!(unsafe { gg_unstable_count_at_zero(2.0, &mut count) }, GgStatus::Ok);
    assert_eq!(count, 1);
}

#[test]
fn bad_parameters_and_null_pointers() {
    let mut x = 0.0;
    assert_eq!(unsafe { gg_equilibria(-1.0, &mut x, &mut x) }, GgStatus::InvalidInput);
    assert_eq!(unsafe { gg_equilibria(1.0, ptr::null_mut(), &mut x) }, GgStatus::NullPointer);
    assert!(last_error().contains("zero"));
    assert_eq!(unsafe { gg_lipschitz_bound(1.0, 1.0, ptr::null_mut()) }, GgStatus::NullPointer);
    assert_eq!(unsafe { gg_trajectory_len(ptr::null(), &mut 0) }, GgStatus::NullPointer);
    unsafe {
        gg_trajectory_free(ptr::null_mut());
        gg_root_set_free(ptr::null_mut());
        gg_density_series_free(ptr::null_mut());
    }
}

#[test]
fn constant_history_trajectory() {
    let samples = [0.5; 17];
    let mut traj = ptr::null_mut();
    let status = unsafe { gg_integrate_samples(1.0, samples.as_ptr(), samples.len(), 4.0, &mut traj) };
    assert_eq!(status, GgStatus::Ok, "{}", last_error());
    let (mut len, mut h) = (0usize, 0.0);
    unsafe {
        assert_eq!(gg_trajectory_len(traj, &mut len), GgStatus::Ok);
        assert_eq!(gg_trajectory_step(traj, &mut h), GgStatus::Ok);
    }
    assert_eq!(len, 65);
    assert!((h - 1.0 / 16.0).abs() < 1e-15);
    let mut buf = vec![0.0; len + 3];
    let mut written = 0usize;
    assert_eq!(unsafe { gg_trajectory_values(traj, buf.as_mut_ptr(), buf.len(), &mut written) }, GgStatus::Ok);
    assert_eq!(written, len);
    assert!(buf[..len].iter().all(|&v| v == 0.5));
    let mut x = 0.0;
    assert_eq!(unsafe { gg_trajectory_eval(traj, 2.3, &mut x) }, GgStatus::Ok);
    assert_eq!(x, 0.5);
    assert_eq!(unsafe { gg_trajectory_eval(traj, 9.0, &mut x) }, GgStatus::InvalidInput);
    unsafe { gg_trajectory_free(traj) };
}

#[test]
fn cosine_trajectory_approaches_equilibrium() {
    let mut traj = ptr::null_mut();
    let status = unsafe { gg_integrate_cosine(10.0, 0.005, 10.0, 1.0, 200, 60.0, &mut traj) };
    assert_eq!(status, GgStatus::Ok, "{}", last_error());
    let mut x = 0.0;
    assert_eq!(unsafe { gg_trajectory_eval(traj, 60.0, &mut x) }, GgStatus::Ok);
    assert!((x - 1.0 / 11.0).abs() < 1e-3);
    unsafe { gg_trajectory_free(traj) };
}

#[test]
fn invariance_violation_is_reported() {
    let mut traj = ptr::null_mut();
    let status = unsafe { gg_integrate_cosine(200.0, 0.005, 10.0, 1.0, 16, 5.0, &mut traj) };
    assert_eq!(status, GgStatus::InvarianceViolation);
    assert!(traj.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn root_set_round_trip() {
    let mut set = ptr::null_mut();
    let status =
        unsafe { gg_find_roots(GgEquilibrium::AtStar, 20.0, -1.0, 1.0, 0.0, 10.0, 16, &mut set) };
    assert_eq!(status, GgStatus::Ok, "{}", last_error());
    let mut len = 0usize;
    assert_eq!(unsafe { gg_root_set_len(set, &mut len) }, GgStatus::Ok);
    assert!(len >= 1);
    let mut prev = f64::INFINITY;
    for i in 0..len {
        let mut r = GgRoot { re: 0.0, im: 0.0, residual: 0.0 };
        assert_eq!(unsafe { gg_root_set_get(set, i, &mut r) }, GgStatus::Ok);
        assert!(r.re <= prev);
        assert!(r.residual < 1e-8);
        prev = r.re;
    }
    let mut r = GgRoot { re: 0.0, im: 0.0, residual: 0.0 };
    assert_eq!(unsafe { gg_root_set_get(set, len, &mut r) }, GgStatus::InvalidInput);
    unsafe { gg_root_set_free(set) };
}

#[test]
fn abm_run_is_reproducible() {
    let mut params = gg_lattice_default();
    params.side = 12;
    let run = || {
        let mut series = ptr::null_mut();
        assert_eq!(unsafe { gg_abm_run(&params, 11, 0, 2.0, 0.5, &mut series) }, GgStatus::Ok);
        let mut len = 0usize;
        assert_eq!(unsafe { gg_density_series_len(series, &mut len) }, GgStatus::Ok);
        let rows: Vec<[f64; 3]> = (0..len)
            .map(|i| {
                let mut row = [0.0; 3];
                let [t, m, p] = &mut row;
                assert_eq!(unsafe { gg_density_series_get(series, i, t, m, p) }, GgStatus::Ok);
                row
            })
            .collect();
        unsafe { gg_density_series_free(series) };
        rows
    };
    let a = run();
    assert_eq!(a.len(), 5);
    assert_eq!(a, run());
    assert!(a.iter().all(|r| r[1] + r[2] <= 1.0 + 1e-12));

    params.seeding = 2.0;
    let mut series = ptr::null_mut();
    assert_eq!(unsafe { gg_abm_run(&params, 11, 0, 2.0, 0.5, &mut series) }, GgStatus::InvalidInput);
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gogrow.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["gg_find_roots", "gg_abm_run", "GG_STATUS_PANIC", "GgTrajectory"] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{}\"\nint main(void) {{ double z, p; return gg_equilibria(1.0, &z, &p) == GG_STATUS_OK ? 0 : 1; }}\n",
            header.display()
        ),
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    match Command::new(&cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(status) => assert!(status.success(), "header does not compile"),
        Err(e) => eprintln!("skipping C compile check, {cc} unavailable: {e}"),
    }
}
