use criterion::{criterion_group, criterion_main, Criterion};

use casimir::{
    pressure_zero_t, AxisPoint, Configuration, Length, Material, QuadratureSettings, WaveNumber,
};

fn bench_dispersion(c: &mut Criterion) {
    let config = Configuration::half_spaces(Material::default_dielectric(), Length::new(10.0).unwrap());
    let point = AxisPoint::new(WaveNumber::new(0.3).unwrap(), WaveNumber::new(0.2).unwrap());
    c.bench_function("inverse_char_values/halfspace", |b| {
        b.iter(|| casimir::dispersion::inverse_char_values(std::hint::black_box(&config), point))
    });
}

fn bench_pressure(c: &mut Criterion) {
    let config = Configuration::half_spaces(Material::default_dielectric(), Length::new(10.0).unwrap());
    let settings = QuadratureSettings {
        n_theta: 100,
        n_chi: 1000,
        ..QuadratureSettings::default()
    };
    c.bench_function("pressure_zero_t/halfspace_reduced", |b| {
        b.iter(|| pressure_zero_t(std::hint::black_box(&config), &settings).unwrap())
    });
    let ideal = Configuration::ideal(Length::new(10.0).unwrap());
    c.bench_function("pressure_zero_t/ideal_reduced", |b| {
        b.iter(|| pressure_zero_t(std::hint::black_box(&ideal), &settings).unwrap())
    });
}

criterion_group!(benches, bench_dispersion, bench_pressure);
criterion_main!(benches);
