//! End-to-end checks through the compiled binary: output formats, exit
//! codes, and determinism of scenario logs.

use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;

fn prcrypt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prcrypt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn encrypt_hex_payload_prints_the_known_vector() {
    let out = prcrypt(&[
        "encrypt",
        "--key",
        "000102030405060708090a0b0c0d0e0f",
        "--key-bits",
        "128",
        "--data",
        "00112233445566778899aabbccddeeff",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "69c4e0d86a7b0430d8cdb78070b4c55a");
}

#[test]
fn zero_key_zero_block_matches_the_reference_oracle() {
    let expected = hex::encode(aesref::encrypt_block(&[0u8; 16], &[0u8; 16]));
    let out = prcrypt(&[
        "encrypt",
        "--key",
        &"00".repeat(16),
        "--key-bits",
        "128",
        "--data",
        &"00".repeat(16),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), expected);
}

#[test]
fn shipped_example_scenarios_run_clean() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios");
    for entry in std::fs::read_dir(root).expect("scenarios directory ships with the repo") {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "scn") {
            let out = prcrypt(&["simulate", path.to_str().unwrap()]);
            assert_eq!(
                code(&out),
                0,
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
}

#[test]
fn encrypt_decrypt_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("plain.bin");
    let cipher = dir.path().join("cipher.bin");
    let back = dir.path().join("back.bin");
    let payload: Vec<u8> = (0..64u8).collect();
    std::fs::write(&plain, &payload).unwrap();

    let key = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";
    let out = prcrypt(&[
        "encrypt",
        "--key",
        key,
        "--key-bits",
        "256",
        "--input",
        plain.to_str().unwrap(),
        "--output",
        cipher.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_ne!(std::fs::read(&cipher).unwrap(), payload);

    let out = prcrypt(&[
        "decrypt",
        "--key",
        key,
        "--key-bits",
        "256",
        "--input",
        cipher.to_str().unwrap(),
        "--output",
        back.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&back).unwrap(), payload);
}

#[test]
fn distinct_exit_codes_per_failure_class() {
    // 3: malformed input (bad hex).
    let out = prcrypt(&[
        "encrypt",
        "--key",
        "zz",
        "--key-bits",
        "128",
        "--data",
        "00",
    ]);
    assert_eq!(code(&out), 3);
    // 3: block misalignment (15 bytes).
    let out = prcrypt(&[
        "encrypt",
        "--key",
        "00000000000000000000000000000000",
        "--key-bits",
        "128",
        "--data",
        &"00".repeat(15),
    ]);
    assert_eq!(code(&out), 3);
    // 3: key length / key-bits mismatch.
    let out = prcrypt(&[
        "encrypt",
        "--key",
        "00000000000000000000000000000000",
        "--key-bits",
        "256",
        "--data",
        &"00".repeat(16),
    ]);
    assert_eq!(code(&out), 3);
    // 5: unreadable input file.
    let out = prcrypt(&[
        "encrypt",
        "--key",
        "00000000000000000000000000000000",
        "--key-bits",
        "128",
        "--input",
        "/nonexistent/path.bin",
    ]);
    assert_eq!(code(&out), 5);
    // 2: clap usage error.
    let out = prcrypt(&["encrypt", "--no-such-flag"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn sbox_dump_shape_and_inverse_flag() {
    let fwd = prcrypt(&["sbox"]);
    assert_eq!(code(&fwd), 0);
    let text = stdout(&fwd);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 16);
    assert!(text.starts_with("63"));
    let inv = prcrypt(&["sbox", "--inverse"]);
    assert!(stdout(&inv).starts_with("52"));
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn simulate_scenario_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let good = write_scenario(
        dir.path(),
        "good.scn",
        "signal-key-length 128\nadvance 4000\nexpect loaded=128\n",
    );
    let out = prcrypt(&["simulate", &good]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let failing = write_scenario(dir.path(), "failing.scn", "advance 10\nexpect clock=99\n");
    let out = prcrypt(&["simulate", &failing]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let malformed = write_scenario(dir.path(), "malformed.scn", "advance ten\n");
    let out = prcrypt(&["simulate", &malformed]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let out = prcrypt(&["simulate", "/nonexistent/file.scn"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn empty_scenario_is_success_with_empty_log() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write_scenario(dir.path(), "empty.scn", "# nothing here\n\n");
    let out = prcrypt(&["simulate", &empty]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
}

#[test]
fn simulate_twice_yields_bit_identical_logs() {
    let dir = tempfile::tempdir().unwrap();
    let scn = write_scenario(
        dir.path(),
        "swap.scn",
        "\
signal-key-length 128
advance 4000
submit-job key_bits=128 key=2b7e151628aed2a6abf7158809cf4f3c data=3243f6a8885a308d313198a2e0370734
advance 100
signal-key-length 256
advance 10000
expect completed=1
expect loaded=256
",
    );
    let a = prcrypt(&["simulate", &scn]);
    let b = prcrypt(&["simulate", &scn]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    // The in-flight job's ciphertext appears in the log, bit-exact.
    assert!(stdout(&a).contains("output=3925841d02dc09fbdc118597196a0b32"));
}

#[test]
fn dynamic_swap_does_not_move_job_completion() {
    let dir = tempfile::tempdir().unwrap();
    let control = write_scenario(
        dir.path(),
        "control.scn",
        "\
signal-key-length 128
advance 4000
submit-job key_bits=128 key=00000000000000000000000000000000 blocks=4
advance 100
advance 20000
expect job:1 completed_at=5000
",
    );
    let swapped = write_scenario(
        dir.path(),
        "swapped.scn",
        "\
signal-key-length 128
advance 4000
submit-job key_bits=128 key=00000000000000000000000000000000 blocks=4
advance 100
signal-key-length 256
advance 20000
expect job:1 completed_at=5000
",
    );
    // Job starts at 4000, needs 1000 cycles; the mid-run dynamic swap at
    // 4100 must not move the completion cycle.
    assert_eq!(code(&prcrypt(&["simulate", &control])), 0);
    assert_eq!(code(&prcrypt(&["simulate", &swapped])), 0);
}

#[test]
fn bench_machine_and_text_agree() {
    let text_out = prcrypt(&["bench"]);
    assert_eq!(code(&text_out), 0);
    let machine_out = prcrypt(&["bench", "--machine"]);
    assert_eq!(code(&machine_out), 0);

    let json: serde_json::Value = serde_json::from_str(&stdout(&machine_out)).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);

    // Every deviation below the documented bound, and text shows the same
    // numbers at its printed precision.
    let text = stdout(&text_out);
    for row in rows {
        let dev = row["throughput_deviation"].as_f64().unwrap();
        assert!(dev < 0.15);
        let printed = format!("{:.3}", row["computed_throughput_mbps"].as_f64().unwrap());
        assert!(text.contains(&printed), "missing {printed} in text table");
    }
    // Cycle rows as modeled.
    for cycles in ["250", "300", "350"] {
        assert!(text.contains(cycles));
    }
}

#[test]
fn bench_rejects_missing_or_corrupt_constants() {
    let out = prcrypt(&["bench", "--constants", "/nonexistent/consts.txt"]);
    assert_eq!(code(&out), 5);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3|128|X|min_period_ns|oops|ok|a\n").unwrap();
    let out = prcrypt(&["bench", "--constants", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // decrypt(encrypt(x)) = x through the whole CLI boundary, for arbitrary
    // block-aligned payloads and any key size.
    #[test]
    fn cli_round_trip_identity(
        blocks in 1usize..5,
        seed in any::<u64>(),
        bits in prop::sample::select(vec![128u16, 192, 256]),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let payload: Vec<u8> = (0..blocks * 16).map(|_| rng.gen()).collect();
        let key: Vec<u8> = (0..bits as usize / 8).map(|_| rng.gen()).collect();
        let key_hex = hex::encode(&key);
        let bits_s = bits.to_string();

        let enc = prcrypt(&[
            "encrypt", "--key", &key_hex, "--key-bits", &bits_s,
            "--data", &hex::encode(&payload),
        ]);
        prop_assert_eq!(code(&enc), 0);
        let cipher_hex = stdout(&enc).trim().to_string();
        prop_assert_ne!(&cipher_hex, &hex::encode(&payload));

        let dec = prcrypt(&[
            "decrypt", "--key", &key_hex, "--key-bits", &bits_s,
            "--data", &cipher_hex,
        ]);
        prop_assert_eq!(code(&dec), 0);
        let round_trip = stdout(&dec).trim().to_string();
        prop_assert_eq!(round_trip, hex::encode(&payload));
    }
}
