use std::fs;

use forge_core::{Grid, NormalizationConstants};
use forge_dataset::*;
use forge_procsim::MaterialParams;
use proptest::prelude::*;

fn small(seed: u64, workers: usize) -> Dataset {
    let config = GenerateConfig {
        run_count: 10,
        seed,
        workers,
    };
    generate(
        &config,
        &Grid::default(),
        &MaterialParams::default(),
        &NormalizationConstants::default(),
    )
    .unwrap()
}

#[test]
fn ten_runs_give_eighty_records() {
    let d = small(1, 2);
    assert_eq!(d.pairs.len(), 80);
    assert_eq!(d.manifest.record_count, 80);
    assert_eq!(d.split(Split::Train).len(), 64);
    assert_eq!(d.split(Split::Validation).len(), 8);
    assert_eq!(d.split(Split::Test).len(), 8);
    for p in &d.pairs {
        assert!(p.input().chain(p.target.iter().copied()).all(|x| (0.0..=1.0).contains(&x)));
    }
}

#[test]
fn write_read_round_trip_is_bit_exact() {
    let d = small(2, 1);
    let dir = tempfile::tempdir().unwrap();
    d.write(dir.path()).unwrap();
    let back = Dataset::read(dir.path()).unwrap();
    assert_eq!(back, d);
}

#[test]
fn same_seed_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    small(3, 1).write(a.path()).unwrap();
    small(3, 3).write(b.path()).unwrap();
    for f in [MANIFEST_FILE, DATA_FILE] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn different_seeds_differ_in_strategy_sections() {
    let a = small(4, 1);
    let b = small(5, 1);
    assert_ne!(a.pairs[0].strategy, b.pairs[0].strategy);
}

#[test]
fn run_is_reproducible_on_its_own() {
    let d = small(6, 2);
    let run7 = simulate_run(
        &Grid::default(),
        &MaterialParams::default(),
        &NormalizationConstants::default(),
        6,
        7,
    )
    .unwrap();
    assert_eq!(&d.pairs[56..64], &run7[..]);
}

#[test]
fn truncated_data_is_reported_with_its_path() {
    let d = small(7, 1);
    let dir = tempfile::tempdir().unwrap();
    d.write(dir.path()).unwrap();
    let data = dir.path().join(DATA_FILE);
    let bytes = fs::read(&data).unwrap();
    fs::write(&data, &bytes[..bytes.len() - 4]).unwrap();
    let err = Dataset::read(dir.path()).unwrap_err();
    assert!(matches!(err, DatasetError::Format { ref path, .. } if path == &data), "{err}");
}

#[test]
fn corrupted_data_fails_the_checksum() {
    let d = small(7, 1);
    let dir = tempfile::tempdir().unwrap();
    d.write(dir.path()).unwrap();
    let data = dir.path().join(DATA_FILE);
    let mut bytes = fs::read(&data).unwrap();
    bytes[100] ^= 1;
    fs::write(&data, bytes).unwrap();
    assert!(Dataset::read(dir.path()).unwrap_err().to_string().contains("checksum"));
}

#[test]
fn missing_directory_names_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let err = Dataset::read(&dir.path().join("nope")).unwrap_err();
    assert!(err.to_string().contains(MANIFEST_FILE));
}

proptest! {
    #[test]
    fn splits_are_disjoint_and_complete(n in 1usize..300, seed in any::<u64>()) {
        let s = split_runs(n, seed);
        let mut all: Vec<usize> = [&s.train[..], &s.validation[..], &s.test[..]].concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn windows_zero_fill_before_the_start(t in 0usize..8) {
        let triplets: Vec<[f32; 3]> = (0..8).map(|s| [s as f32 / 8.0 + 0.01, 0.5, 1.0]).collect();
        let w = strategy_window(&triplets, t);
        for slot in 0..TRIPLETS {
            let present = t + slot >= TRIPLETS - 1;
            prop_assert_eq!(w[slot * 3..slot * 3 + 3].iter().all(|&x| x == 0.0), !present);
        }
    }
}
