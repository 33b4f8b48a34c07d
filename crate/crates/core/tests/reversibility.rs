use proptest::prelude::*;

use rrdh::bitplane::split;
use rrdh::corpus::{gen_secret, synth_image, GrayImage, SynthKind};
use rrdh::error::Error;
use rrdh::hardening::{HardeningConfig, ScanOrder};
use rrdh::rdh_core::{embed, estimate_secret_capacity, extract, visit_order, CarrierLayout, EmbedConfig, PredictorChoice};

fn config() -> impl Strategy<Value = EmbedConfig> {
    (1u8..=3, prop::bool::ANY, prop_oneof![Just(1u32), Just(3)], prop_oneof![Just(1u32), Just(2), Just(4)])
        .prop_flat_map(|(p, raster, r, t)| {
            let max_n = match t {
                1 => 5u8,
                2 => 3,
                _ => 2,
            };
            (1..=max_n).prop_map(move |n| EmbedConfig {
                n,
                predictor: PredictorChoice::Fixed(p),
                hardening: HardeningConfig {
                    aux_repetition: r,
                    ordering: if raster { ScanOrder::Raster } else { ScanOrder::Complexity },
                    shift: t,
                },
            })
        })
}

fn cover() -> impl Strategy<Value = GrayImage> {
    (prop::bool::ANY, 52usize..80, any::<u64>()).prop_map(|(tex, size, seed)| {
        let kind = if tex { SynthKind::Texture } else { SynthKind::SmoothGradient };
        synth_image(kind, size, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extract_inverts_embed(image in cover(), cfg in config(), fill in 0.0f64..1.0, seed in any::<u64>()) {
        let cap = estimate_secret_capacity(&image, &cfg).unwrap();
        let mut bits = (cap as f64 * fill) as usize;
        let rec = loop {
            match embed(&image, &gen_secret(seed, bits), &cfg) {
                Err(Error::Capacity { .. }) if bits > 0 => bits = bits * 9 / 10,
                other => break other,
            }
        };
        prop_assume!(!matches!(rec, Err(Error::Capacity { .. })));
        let rec = rec.unwrap();
        let out = extract(&rec.marked, &cfg.extract_config()).unwrap();
        prop_assert_eq!(out.secret, gen_secret(seed, bits));
        prop_assert_eq!(out.restored, image);
    }

    #[test]
    fn auto_predictor_is_reversible(image in cover(), seed in any::<u64>()) {
        let cfg = EmbedConfig { predictor: PredictorChoice::Auto, ..EmbedConfig::baseline(2, 1) };
        let secret = gen_secret(seed, 32);
        if let Ok(rec) = embed(&image, &secret, &cfg) {
            let out = extract(&rec.marked, &cfg.extract_config()).unwrap();
            prop_assert_eq!(out.secret, secret);
            prop_assert_eq!(out.restored, image);
        }
    }

    #[test]
    fn raster_order_ignores_values(image in cover(), noise_seed in any::<u64>()) {
        let layout = CarrierLayout::new(image.height(), image.width(), 1).unwrap();
        let noisy = synth_image(SynthKind::Texture, image.width(), noise_seed).unwrap();
        let a = visit_order(&layout.grey, &split(&image, 3).unwrap(), ScanOrder::Raster).unwrap();
        let b = visit_order(&layout.grey, &split(&noisy, 3).unwrap(), ScanOrder::Raster).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn embedding_is_deterministic() {
    let img = synth_image(SynthKind::Texture, 64, 11).unwrap();
    let cfg = EmbedConfig { predictor: PredictorChoice::Auto, ..EmbedConfig::baseline(3, 1) };
    let a = embed(&img, &gen_secret(1, 300), &cfg).unwrap();
    let b = embed(&img, &gen_secret(1, 300), &cfg).unwrap();
    assert_eq!(a.marked, b.marked);
    assert_eq!(a.metadata(), b.metadata());
}
