use rrdh::analysis::{
    nbcr_report, ordering_drift, parse_grid_token, robustness_bench, write_csv, write_json, Attack, BenchOptions,
};
use rrdh::corpus::{load_corpus_dir, load_pgm, save_pgm, synth_image, GrayImage, SynthKind};
use rrdh::error::Error;
use rrdh::rdh_core::PredictorChoice;

fn header(csv: &[u8]) -> String {
    String::from_utf8(csv.to_vec()).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn csv_schemas() {
    let images = vec![("t".to_string(), synth_image(SynthKind::Texture, 64, 1).unwrap())];

    let nbcr = nbcr_report(&images, &[95]).unwrap();
    let mut out = Vec::new();
    write_csv(&nbcr.all_rows(), &mut out).unwrap();
    assert_eq!(header(&out), "image,qf,plane,nbcr_pct");
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 1 + 8 + 8);

    let drift = ordering_drift(&images[0].1, (8, 8), 3, &[85, 90]).unwrap();
    let mut out = Vec::new();
    write_csv(&drift.rows(), &mut out).unwrap();
    assert_eq!(header(&out), "label,mu_orig,mu_qf,qf,rank_orig,rank_qf");

    let grid = [parse_grid_token("baseline", 3, PredictorChoice::Auto).unwrap()];
    let rows = robustness_bench(&images, &grid, &[Attack::None], &BenchOptions::default()).unwrap();
    let mut out = Vec::new();
    write_csv(&rows, &mut out).unwrap();
    assert_eq!(header(&out), "image,n,N,ordering,r,T,qf,ber,aux_intact,status");
    let line = String::from_utf8(out).unwrap().lines().nth(1).unwrap().to_string();
    assert!(line.starts_with("t,3,"), "{line}");
    assert!(line.ends_with(",none,0.0,true,ok"), "{line}");

    let mut json = Vec::new();
    write_json(&rows, &mut json).unwrap();
    let parsed: serde_json::Value = serde_json::from_slice(&json).unwrap();
    let keys: Vec<_> = parsed[0].as_object().unwrap().keys().cloned().collect();
    for k in ["image", "n", "N", "ordering", "r", "T", "qf", "ber", "aux_intact", "status"] {
        assert!(keys.contains(&k.to_string()), "{k}");
    }
}

#[test]
fn pgm_files_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let img = synth_image(SynthKind::Texture, 512, 9).unwrap();
    let path = dir.path().join("big.pgm");
    save_pgm(&img, &path).unwrap();
    assert_eq!(load_pgm(&path).unwrap(), img);

    let tiny = GrayImage::new(1, 1, vec![42]).unwrap();
    let tiny_path = dir.path().join("tiny.pgm");
    save_pgm(&tiny, &tiny_path).unwrap();
    let bytes = std::fs::read(&tiny_path).unwrap();
    assert_eq!(*bytes.last().unwrap(), 42);
}

#[test]
fn unwritable_and_missing_paths() {
    let dir = tempfile::tempdir().unwrap();
    let img = GrayImage::filled(2, 2, 1);
    let bad = dir.path().join("missing-dir").join("x.pgm");
    assert!(matches!(save_pgm(&img, &bad), Err(Error::Io(_))));
    assert!(matches!(load_pgm(dir.path().join("nope.pgm")), Err(Error::Io(_))));
}

#[test]
fn corpus_dir_sorted_by_name() {
    let dir = tempfile::tempdir().unwrap();
    for (name, v) in [("b", 2u8), ("a", 1), ("c", 3)] {
        save_pgm(&GrayImage::filled(4, 4, v), dir.path().join(format!("{name}.pgm"))).unwrap();
    }
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let corpus = load_corpus_dir(dir.path()).unwrap();
    let names: Vec<_> = corpus.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["a", "b", "c"]);
    assert_eq!(corpus[2].1.get(0, 0), 3);
}
