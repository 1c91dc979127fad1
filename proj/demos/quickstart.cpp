// Train the ensemble on a small synthetic corpus and classify a few names.
#include <iostream>

#include "dnssquat/dnssquat.hpp"

int main() {
    using namespace dnssquat;
    const auto records = generate_labeled({2000, 1300, 7});
    const Matrix x = extract_batch(records);
    std::vector<int> y;
    for (const auto& r : records) y.push_back(*r.label);

    const auto split = stratified_split(y, 0.3, 42);
    const auto model = train_ensemble(x.select_rows(split.train), select<int>(y, split.train));
    write_report_table(std::cout, evaluate_all(model, x.select_rows(split.test), select<int>(y, split.test)));

    for (const char* name : {"google", "wikipedia", "x8k2jq0vz7m1p", "weatherchannel"}) {
        const auto f = extract(name);
        const Matrix one = [&] { Matrix m(0, kFeatureCount); m.push_row(f.values()); return m; }();
        std::cout << name << " -> " << (predict_ensemble(model, one)[0].label ? "dga" : "legit") << '\n';
    }
}
