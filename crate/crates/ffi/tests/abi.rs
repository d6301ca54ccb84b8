use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use dnacrack::ppm::write_ppm;
use dnacrack::synth::natural_image;
use dnacrack::{encrypt, SecretKey};
use dnacrack_ffi::*;

const KEY: &str = "k1=1\nk2=7\nx0=0.501\nmu0=3.81\nx0p=0.401\nmu0p=3.68\n";

fn image_from(img: &dnacrack::RgbImage) -> *mut DnacrackImage {
    let data = img.to_interleaved();
    let mut out = ptr::null_mut();
    let st = unsafe {
        dnacrack_image_new(
            img.width(),
            img.height(),
            data.as_ptr(),
            data.len(),
            &mut out,
        )
    };
    assert_eq!(st, DnacrackStatus::Ok);
    out
}

fn rgb_of(img: *const DnacrackImage) -> Vec<u8> {
    unsafe {
        let n = dnacrack_image_width(img) * dnacrack_image_height(img) * 3;
        let mut buf = vec![0u8; n];
        assert_eq!(
            dnacrack_image_copy_rgb(img, buf.as_mut_ptr(), n),
            DnacrackStatus::Ok
        );
        buf
    }
}

fn parse_key(text: &str) -> *mut DnacrackKey {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { dnacrack_key_parse(c.as_ptr(), &mut out) },
        DnacrackStatus::Ok
    );
    out
}

#[test]
fn encrypt_decrypt_matches_core() {
    let img = natural_image(20, 12, 4);
    let key = SecretKey::from_key_file(KEY).unwrap();
    unsafe {
        let h = image_from(&img);
        let k = parse_key(KEY);
        let mut c = ptr::null_mut();
        let mut p = ptr::null_mut();
        assert_eq!(dnacrack_encrypt(h, k, &mut c), DnacrackStatus::Ok);
        assert_eq!(rgb_of(c), encrypt(&img, &key).unwrap().to_interleaved());
        assert_eq!(dnacrack_decrypt(c, k, &mut p), DnacrackStatus::Ok);
        assert_eq!(rgb_of(p), img.to_interleaved());
        for x in [h, c, p] {
            dnacrack_image_free(x);
        }
        dnacrack_key_free(k);
    }
}

#[test]
fn attack_and_eqkey_round_trip() {
    let known = natural_image(32, 32, 1);
    let secret = natural_image(32, 32, 2);
    unsafe {
        let k = parse_key(KEY);
        let (kh, sh) = (image_from(&known), image_from(&secret));
        let (mut kc, mut sc) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(dnacrack_encrypt(kh, k, &mut kc), DnacrackStatus::Ok);
        assert_eq!(dnacrack_encrypt(sh, k, &mut sc), DnacrackStatus::Ok);

        let mut ek = ptr::null_mut();
        let mut stage = DnacrackAttackStage::InconsistentPair;
        assert_eq!(
            dnacrack_attack(kh, kc, &mut ek, &mut stage),
            DnacrackStatus::Ok
        );
        assert_eq!(stage, DnacrackAttackStage::None);
        assert_eq!(dnacrack_eqkey_k1(ek), 1);

        let (mut buf, mut len) = (ptr::null_mut(), 0usize);
        assert_eq!(
            dnacrack_eqkey_to_bytes(ek, &mut buf, &mut len),
            DnacrackStatus::Ok
        );
        assert_eq!(len, 13 + 4 * 32 * 32);
        assert_eq!(std::slice::from_raw_parts(buf, 4), b"EQK1");
        let mut ek2 = ptr::null_mut();
        assert_eq!(
            dnacrack_eqkey_from_bytes(buf, len, &mut ek2),
            DnacrackStatus::Ok
        );
        dnacrack_buffer_free(buf, len);

        let mut back = ptr::null_mut();
        assert_eq!(
            dnacrack_eqkey_decrypt(ek2, sc, &mut back),
            DnacrackStatus::Ok
        );
        assert_eq!(rgb_of(back), secret.to_interleaved());

        let mut flags = vec![0u8; 4 * 32 * 32];
        assert_eq!(
            dnacrack_structure_leak(kc, flags.as_mut_ptr(), flags.len()),
            DnacrackStatus::Ok
        );
        assert!(flags.iter().all(|&f| f <= 1) && flags.contains(&1));
        assert_eq!(
            dnacrack_structure_leak(kc, flags.as_mut_ptr(), flags.len() - 1),
            DnacrackStatus::InvalidArgument
        );

        for x in [kh, sh, kc, sc, back] {
            dnacrack_image_free(x);
        }
        dnacrack_eqkey_free(ek);
        dnacrack_eqkey_free(ek2);
        dnacrack_key_free(k);
    }
}

#[test]
fn attack_failure_reports_stage() {
    let plain = dnacrack::RgbImage::filled(4, 4, [0, 0, 0]).unwrap();
    unsafe {
        let k = parse_key(KEY);
        let p = image_from(&plain);
        let mut c = ptr::null_mut();
        assert_eq!(dnacrack_encrypt(p, k, &mut c), DnacrackStatus::Ok);
        let mut ek = ptr::null_mut();
        let mut stage = DnacrackAttackStage::None;
        assert_eq!(
            dnacrack_attack(p, c, &mut ek, &mut stage),
            DnacrackStatus::AttackFailed
        );
        assert_ne!(stage, DnacrackAttackStage::None);
        assert!(ek.is_null());
        dnacrack_image_free(p);
        dnacrack_image_free(c);
        dnacrack_key_free(k);
    }
}

#[test]
fn ppm_through_the_abi() {
    let img = natural_image(5, 3, 0);
    let bytes = write_ppm(&img);
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(
            dnacrack_image_from_ppm(bytes.as_ptr(), bytes.len(), &mut h),
            DnacrackStatus::Ok
        );
        assert_eq!((dnacrack_image_width(h), dnacrack_image_height(h)), (5, 3));
        let (mut buf, mut len) = (ptr::null_mut(), 0usize);
        assert_eq!(
            dnacrack_image_to_ppm(h, &mut buf, &mut len),
            DnacrackStatus::Ok
        );
        assert_eq!(std::slice::from_raw_parts(buf, len), &bytes[..]);
        dnacrack_buffer_free(buf, len);
        dnacrack_image_free(h);

        let mut bad = ptr::null_mut();
        let junk = b"P3\n1 1\n255\n";
        assert_eq!(
            dnacrack_image_from_ppm(junk.as_ptr(), junk.len(), &mut bad),
            DnacrackStatus::MalformedImage
        );
        assert!(bad.is_null());
    }
}

#[test]
fn null_and_invalid_arguments() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(
            dnacrack_image_new(2, 2, ptr::null(), 12, &mut out),
            DnacrackStatus::NullPointer
        );
        let data = [0u8; 11];
        assert_eq!(
            dnacrack_image_new(2, 2, data.as_ptr(), 11, &mut out),
            DnacrackStatus::MalformedImage
        );
        assert_eq!(
            dnacrack_image_new(0, 2, data.as_ptr(), 0, &mut out),
            DnacrackStatus::MalformedImage
        );
        assert!(out.is_null());
        assert_eq!(
            dnacrack_key_parse(ptr::null(), ptr::null_mut()),
            DnacrackStatus::NullPointer
        );
        let bad = CString::new("k1=1\n").unwrap();
        let mut k = ptr::null_mut();
        assert_eq!(
            dnacrack_key_parse(bad.as_ptr(), &mut k),
            DnacrackStatus::MalformedKey
        );
        let mut ek = ptr::null_mut();
        assert_eq!(
            dnacrack_eqkey_from_bytes(b"EQK0".as_ptr(), 4, &mut ek),
            DnacrackStatus::MalformedEquivalentKey
        );
        assert_eq!(
            dnacrack_encrypt(ptr::null(), ptr::null(), ptr::null_mut()),
            DnacrackStatus::NullPointer
        );

        let a = image_from(&natural_image(2, 2, 0));
        let b = image_from(&natural_image(3, 2, 0));
        let k = parse_key(KEY);
        let mut e = ptr::null_mut();
        let mut c = ptr::null_mut();
        assert_eq!(dnacrack_encrypt(b, k, &mut c), DnacrackStatus::Ok);
        assert_eq!(
            dnacrack_attack(a, c, &mut e, ptr::null_mut()),
            DnacrackStatus::GeometryMismatch
        );
        for x in [a, b, c] {
            dnacrack_image_free(x);
        }
        dnacrack_key_free(k);
        dnacrack_image_free(ptr::null_mut());
        dnacrack_buffer_free(ptr::null_mut(), 0);
    }
}

#[test]
fn every_status_has_a_message() {
    use DnacrackStatus::*;
    for s in [
        Ok,
        NullPointer,
        InvalidArgument,
        MalformedImage,
        MalformedKey,
        MalformedEquivalentKey,
        GeometryMismatch,
        AttackFailed,
        Internal,
    ] {
        let m = unsafe { CStr::from_ptr(dnacrack_status_message(s)) };
        assert!(!m.to_bytes().is_empty());
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/dnacrack.h"))
            .unwrap();
    let src =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(header.contains("typedef struct DnacrackImage DnacrackImage;"));
}

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libdnacrack_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let build = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "smoke ok");
}
