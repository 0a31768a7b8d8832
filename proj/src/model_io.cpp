#include <json.hpp>
#include <memory>

#include "confkern/conformal.hpp"
#include "confkern/errors.hpp"
#include "confkern/svm.hpp"

namespace confkern {

namespace {

using nlohmann::json;

json spec_to_json(const KernelSpec& s) {
    json j;
    switch (s.kind) {
        case KernelKind::Linear: j["kind"] = "linear"; break;
        case KernelKind::Gaussian: j["kind"] = "gaussian"; break;
        case KernelKind::GC: j["kind"] = "gc"; break;
        case KernelKind::Diffusion: j["kind"] = "diffusion"; break;
    }
    j["gamma"] = s.gamma;
    if (s.sigma) j["sigma"] = *s.sigma;
    j["t"] = s.t;
    j["log_scale"] = s.log_scale_diffusion;
    j["drop_const"] = s.drop_diffusion_constant;
    return j;
}

KernelSpec spec_from_json(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "linear") return KernelSpec::linear();
    if (kind == "gaussian") {
        KernelSpec s = KernelSpec::gaussian(j.at("gamma").get<double>());
        if (j.contains("sigma")) s.sigma = j.at("sigma").get<double>();
        return s;
    }
    if (kind == "gc") return KernelSpec::gc(j.at("gamma").get<double>());
    if (kind == "diffusion") {
        return KernelSpec::diffusion(j.at("t").get<double>(), j.at("log_scale").get<bool>(),
                                     j.at("drop_const").get<bool>());
    }
    throw DataError("model json: unknown kernel kind '" + kind + "'");
}

json conformal_spec_to_json(const ConformalSpec& s) {
    json j;
    switch (s.kind) {
        case ConformalKind::D1: j["kind"] = "d1"; break;
        case ConformalKind::D2: j["kind"] = "d2"; break;
        case ConformalKind::D3: j["kind"] = "d3"; break;
        case ConformalKind::Dcos: j["kind"] = "dcos"; break;
        case ConformalKind::Darc: j["kind"] = "darc"; break;
    }
    j["tau"] = s.tau;
    j["m"] = s.m;
    j["kappa"] = s.kappa;
    switch (s.denom) {
        case TauDenominator::TwoTauSq: j["denom"] = "2tau2"; break;
        case TauDenominator::TwoTau: j["denom"] = "2tau"; break;
        case TauDenominator::Tau: j["denom"] = "tau"; break;
    }
    return j;
}

ConformalSpec conformal_spec_from_json(const json& j) {
    ConformalSpec s;
    const std::string kind = j.at("kind");
    if (kind == "d1") {
        s = ConformalSpec::d1(j.at("tau").get<double>());
    } else if (kind == "d2") {
        s = ConformalSpec::d2(j.at("m").get<int>());
    } else if (kind == "d3") {
        s = ConformalSpec::d3(j.at("kappa").get<double>());
    } else if (kind == "dcos" || kind == "darc") {
        const std::string d = j.at("denom");
        TauDenominator denom = TauDenominator::TwoTauSq;
        if (d == "2tau") denom = TauDenominator::TwoTau;
        else if (d == "tau") denom = TauDenominator::Tau;
        else if (d != "2tau2") throw DataError("model json: unknown denom '" + d + "'");
        s = kind == "dcos" ? ConformalSpec::dcos(j.at("m").get<int>(), denom)
                           : ConformalSpec::darc(j.at("m").get<int>(), denom);
    } else {
        throw DataError("model json: unknown transform kind '" + kind + "'");
    }
    return s;
}

json point_to_json(const SparseVector& v) {
    json j;
    j["dim"] = v.dim();
    j["simplex"] = v.is_simplex();
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    idx.reserve(v.nnz());
    val.reserve(v.nnz());
    for (const auto& e : v.entries()) {
        idx.push_back(e.index);
        val.push_back(e.value);
    }
    j["idx"] = std::move(idx);
    j["val"] = std::move(val);
    return j;
}

SparseVector point_from_json(const json& j) {
    const auto idx = j.at("idx").get<std::vector<std::uint32_t>>();
    const auto val = j.at("val").get<std::vector<double>>();
    if (idx.size() != val.size()) throw DataError("model json: idx/val length mismatch");
    std::vector<SparseVector::Entry> entries(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) entries[i] = {idx[i], val[i]};
    return SparseVector(j.at("dim").get<std::size_t>(), std::move(entries),
                        j.at("simplex").get<bool>());
}

json model_to_json(const TrainedModel& m);

json kernel_to_json(const KernelEvaluator& k) {
    if (const auto* base = dynamic_cast<const BaseKernel*>(&k)) {
        return json{{"type", "base"}, {"spec", spec_to_json(base->spec())}};
    }
    if (const auto* conf = dynamic_cast<const ConformalKernel*>(&k)) {
        json j;
        j["type"] = "conformal";
        j["base"] = spec_to_json(conf->base());
        const FittedConformal& f = conf->fitted();
        j["conformal"] = conformal_spec_to_json(f.spec);
        json pts = json::array();
        for (const auto& p : f.sv_points) pts.push_back(point_to_json(p));
        j["sv_points"] = std::move(pts);
        j["sv_taus"] = f.sv_taus;
        j["sv_alphas"] = f.sv_alphas;
        if (f.base_model) {
            if (dynamic_cast<const BaseKernel*>(f.base_model->kernel.get()) == nullptr) {
                throw DataError("model json: nested conformal base models are not supported");
            }
            j["base_model"] = model_to_json(*f.base_model);
        }
        return j;
    }
    throw DataError("model json: kernel type is not serializable: " + k.describe());
}

std::shared_ptr<const KernelEvaluator> kernel_from_json(const json& j);

TrainedModel model_from_json(const json& j) {
    if (j.at("schema_version").get<int>() != 1) {
        throw DataError("model json: unsupported schema version");
    }
    TrainedModel m;
    m.C = j.at("C").get<double>();
    m.bias = j.at("bias").get<double>();
    m.kkt_violation = j.at("kkt_violation").get<double>();
    m.dual_objective = j.at("dual_objective").get<double>();
    m.sv_indices = j.at("sv_indices").get<std::vector<std::size_t>>();
    m.alphas = j.at("alphas").get<std::vector<double>>();
    m.sv_labels = j.at("sv_labels").get<std::vector<int>>();
    for (const auto& p : j.at("sv_points")) m.sv_points.push_back(point_from_json(p));
    if (m.alphas.size() != m.sv_indices.size() || m.sv_labels.size() != m.sv_indices.size() ||
        m.sv_points.size() != m.sv_indices.size()) {
        throw DataError("model json: inconsistent SV array lengths");
    }
    m.kernel = kernel_from_json(j.at("kernel"));
    m.kernel_desc = m.kernel->describe();
    return m;
}

std::shared_ptr<const KernelEvaluator> kernel_from_json(const json& j) {
    const std::string type = j.at("type");
    if (type == "base") {
        return std::make_shared<BaseKernel>(spec_from_json(j.at("spec")));
    }
    if (type == "conformal") {
        FittedConformal f;
        f.spec = conformal_spec_from_json(j.at("conformal"));
        for (const auto& p : j.at("sv_points")) f.sv_points.push_back(point_from_json(p));
        f.sv_taus = j.at("sv_taus").get<std::vector<double>>();
        f.sv_alphas = j.at("sv_alphas").get<std::vector<double>>();
        if (j.contains("base_model")) {
            f.base_model = std::make_shared<TrainedModel>(model_from_json(j.at("base_model")));
        }
        return std::make_shared<ConformalKernel>(std::move(f),
                                                 spec_from_json(j.at("base")));
    }
    throw DataError("model json: unknown kernel type '" + type + "'");
}

json model_to_json(const TrainedModel& m) {
    json j;
    j["schema_version"] = 1;
    j["C"] = m.C;
    j["bias"] = m.bias;
    j["kkt_violation"] = m.kkt_violation;
    j["dual_objective"] = m.dual_objective;
    j["sv_indices"] = m.sv_indices;
    j["alphas"] = m.alphas;
    j["sv_labels"] = m.sv_labels;
    json pts = json::array();
    for (const auto& p : m.sv_points) pts.push_back(point_to_json(p));
    j["sv_points"] = std::move(pts);
    if (!m.kernel) throw DataError("model json: model has no kernel evaluator");
    j["kernel"] = kernel_to_json(*m.kernel);
    return j;
}

}  // namespace

std::string save_model_json(const TrainedModel& m) { return model_to_json(m).dump(2); }

TrainedModel load_model_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw DataError(std::string("model json: parse failure: ") + e.what());
    }
    return model_from_json(j);
}

}  // namespace confkern
