#include "railload/beam_modal.hpp"
#include "railload/errors.hpp"
#include "railload/features.hpp"
#include "railload/load_estimator.hpp"
#include "railload/mdof.hpp"
#include "railload/track_model.hpp"
#include "railload/twodof.hpp"
#include "railload/welch.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace railload;

namespace {

py::tuple psd_tuple(const Psd& p) { return py::make_tuple(p.omega(), p.density()); }

py::dict features_dict(const signal::FeatureVector& f) {
    py::dict d;
    d["rigid_peak_freq"] = f.rigid_peak_freq;
    d["flexible_peak_freq"] = f.flexible_peak_freq;
    d["band_power_1_5Hz"] = f.band_power_1_5Hz;
    d["psd_at_fixed_freqs"] = f.psd_at_fixed_freqs;
    d["total_rms"] = f.total_rms;
    return d;
}

}  // namespace

PYBIND11_MODULE(_railload, m) {
    m.doc() = "Rail carbody vibration models and passenger-load estimation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
    py::register_exception<DegenerateFitError>(m, "DegenerateFitError", base.ptr());

    py::class_<twodof::TwoDofParams>(m, "TwoDofParams")
        .def(py::init<>())
        .def_static("heavy_carbody_damper", &twodof::TwoDofParams::heavy_carbody_damper)
        .def_readwrite("carbody_mass", &twodof::TwoDofParams::carbody_mass)
        .def_readwrite("bogie_mass", &twodof::TwoDofParams::bogie_mass)
        .def_readwrite("carbody_stiffness", &twodof::TwoDofParams::carbody_stiffness)
        .def_readwrite("carbody_damping", &twodof::TwoDofParams::carbody_damping)
        .def_readwrite("bogie_stiffness", &twodof::TwoDofParams::bogie_stiffness)
        .def_readwrite("bogie_damping", &twodof::TwoDofParams::bogie_damping)
        .def_readwrite("mass_per_passenger", &twodof::TwoDofParams::mass_per_passenger)
        .def("validate", &twodof::TwoDofParams::validate);

    m.def("transfer_function", &twodof::transfer_function, py::arg("params"), py::arg("s"));
    m.def("loaded_params", &twodof::loaded_params, py::arg("params"), py::arg("passenger_count"));

    py::class_<mdof::MdofParams>(m, "MdofParams")
        .def(py::init<>())
        .def_readwrite("carbody_mass", &mdof::MdofParams::carbody_mass)
        .def_readwrite("carbody_pitch_inertia", &mdof::MdofParams::carbody_pitch_inertia)
        .def_readwrite("bending_stiffness", &mdof::MdofParams::bending_stiffness)
        .def_readwrite("internal_damping", &mdof::MdofParams::internal_damping)
        .def_readwrite("length", &mdof::MdofParams::length)
        .def_readwrite("bogie_mass", &mdof::MdofParams::bogie_mass)
        .def_readwrite("bogie_pitch_inertia", &mdof::MdofParams::bogie_pitch_inertia)
        .def_readwrite("bogie_half_spacing", &mdof::MdofParams::bogie_half_spacing)
        .def_readwrite("half_wheelbase", &mdof::MdofParams::half_wheelbase)
        .def_readwrite("primary_stiffness", &mdof::MdofParams::primary_stiffness)
        .def_readwrite("primary_damping", &mdof::MdofParams::primary_damping)
        .def_readwrite("secondary_stiffness", &mdof::MdofParams::secondary_stiffness)
        .def_readwrite("secondary_damping", &mdof::MdofParams::secondary_damping)
        .def_readwrite("mass_per_passenger", &mdof::MdofParams::mass_per_passenger)
        .def_readwrite("speed", &mdof::MdofParams::speed)
        .def_readwrite("n_modes", &mdof::MdofParams::n_modes)
        .def("validate", &mdof::MdofParams::validate);

    m.def("response_at",
          py::overload_cast<const mdof::MdofParams&, double, std::complex<double>>(&mdof::response_at),
          py::arg("params"), py::arg("x"), py::arg("s"));

    py::class_<track::TrackSpectrumParams>(m, "TrackSpectrumParams")
        .def(py::init<>())
        .def_readwrite("intensity", &track::TrackSpectrumParams::intensity)
        .def_readwrite("upper_cutoff", &track::TrackSpectrumParams::upper_cutoff)
        .def_readwrite("lower_cutoff", &track::TrackSpectrumParams::lower_cutoff)
        .def_readwrite("speed", &track::TrackSpectrumParams::speed);

    m.def("track_psd", py::overload_cast<const track::TrackSpectrumParams&, double>(&track::track_psd),
          py::arg("params"), py::arg("omega"));
    m.def(
        "accel_psd_at",
        [](const mdof::MdofParams& p, const track::TrackSpectrumParams& t, double x, int load,
           const std::vector<double>& omega) { return psd_tuple(mdof::accel_psd_at(p, t, x, load, omega)); },
        py::arg("params"), py::arg("track"), py::arg("x"), py::arg("load_count"), py::arg("omega"),
        "Returns (omega, density per rad/s).");
    m.def(
        "synthesize_profile",
        [](const track::TrackSpectrumParams& t, double duration, double fs, std::uint64_t seed) {
            return track::synthesize_profile(t, duration, fs, seed).samples;
        },
        py::arg("params"), py::arg("duration"), py::arg("sample_rate"), py::arg("seed"));
    m.def("solve_mode_roots", &beam::solve_mode_roots, py::arg("count"));

    m.def(
        "welch_psd",
        [](const std::vector<double>& series, double fs, std::size_t segment_length) {
            signal::WelchConfig cfg;
            cfg.segment_length = segment_length;
            return psd_tuple(signal::welch_psd(series, fs, cfg));
        },
        py::arg("series"), py::arg("sample_rate"), py::arg("segment_length") = 2048,
        "Returns (omega, density per rad/s).");
    m.def(
        "extract_features",
        [](const std::vector<double>& omega, const std::vector<double>& density) {
            return features_dict(signal::extract_features(Psd(omega, density)));
        },
        py::arg("omega"), py::arg("density"));

    m.def(
        "isotonic_nonincreasing",
        [](const std::vector<double>& v, const std::vector<double>& w) {
            return estimator::isotonic_nonincreasing(v, w);
        },
        py::arg("values"), py::arg("weights") = std::vector<double>{});
    m.def(
        "calibrate_scalar",
        [](const std::vector<double>& features, const std::vector<int>& counts) {
            if (features.size() != counts.size()) throw InputError("features and counts differ in length");
            std::vector<estimator::CalibrationSample> samples;
            for (std::size_t i = 0; i < features.size(); ++i) {
                estimator::CalibrationSample s;
                s.features.psd_at_fixed_freqs[3.0] = features[i];
                s.passenger_count = counts[i];
                samples.push_back(s);
            }
            return estimator::model_to_json(estimator::calibrate(samples));
        },
        py::arg("features"), py::arg("counts"),
        "Calibrates on scalar features and returns the model JSON document.");
    m.def(
        "estimate_scalar",
        [](const std::string& model_json, double feature) {
            const auto e = estimator::estimate_load(estimator::model_from_json(model_json), feature);
            return py::make_tuple(e.count, e.lower, e.upper, e.clamped);
        },
        py::arg("model_json"), py::arg("feature"), "Returns (count, lower, upper, clamped).");
}
