#include "bayesdl/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bayesdl/core/errors.hpp"
#include "bayesdl/core/rng.hpp"

namespace bayesdl::data {

namespace {

// Arbitrary constants of the generator. Each probability is a logistic
// link of a fixed score; "booked" means any destination other than NDF.
constexpr double kAgeMissingMarginal = 0.42;
constexpr double kAgeMissingBookedScore = -1.2;
constexpr double kGenderMissingScore[2] = {0.2, -0.9};   // NDF, booked
constexpr double kBookingRequestScore[2] = {-4.0, -1.5};
constexpr double kSessionMean[2] = {6.0, 14.0};
constexpr double kNoSessionScore[2] = {-0.8, -2.5};
constexpr double kLocalLanguageScore = -0.6;              // foreign destinations
constexpr double kAgeMean[2] = {38.0, 33.0};

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Index poisson(double mean, Rng& rng) {
  const double limit = std::exp(-mean);
  double prod = rng.uniform01();
  Index k = 0;
  while (prod > limit) {
    prod *= rng.uniform01();
    ++k;
  }
  return k;
}

std::string language_of(const std::string& dest) {
  if (dest == "FR") return "fr";
  if (dest == "IT") return "it";
  if (dest == "ES") return "es";
  if (dest == "DE") return "de";
  if (dest == "NL") return "nl";
  if (dest == "PT") return "pt";
  return "en";
}

template <std::size_t N>
const char* pick(const char* const (&options)[N], const double (&weights)[N], Rng& rng) {
  double u = rng.uniform01();
  for (std::size_t i = 0; i + 1 < N; ++i) {
    if (u < weights[i]) return options[i];
    u -= weights[i];
  }
  return options[N - 1];
}

}  // namespace

ClassDist destination_prior() {
  ClassDist d;
  d.labels = {"NDF", "US", "other", "FR", "GB", "IT", "ES", "CA", "DE", "NL", "AU", "PT"};
  d.proportions.resize(12);
  d.proportions << 59, 29, 4.8, 2.2, 1.2, 1.2, 1, 0.6, 0.5, 0.31, 0.3, 0.11;
  d.proportions /= d.proportions.sum();
  return d;
}

SynthData synth_airbnb(Index n_users, std::uint64_t seed) {
  if (n_users < 100) throw DomainError("synth_airbnb: n_users must be at least 100");
  const ClassDist prior = destination_prior();
  const double p_ndf = prior.proportions[0];
  const double age_missing_booked = logistic(kAgeMissingBookedScore);
  const double age_missing_ndf = (kAgeMissingMarginal - (1 - p_ndf) * age_missing_booked) / p_ndf;

  Rng label_rng(mix_seed(seed, 1)), user_rng(mix_seed(seed, 2)), session_rng(mix_seed(seed, 3));
  const auto n = static_cast<std::size_t>(n_users);
  std::vector<std::string> ids(n), labels(n), gender(n), language(n), signup(n), device(n), browser(n);
  std::vector<bool> gender_missing(n), age_missing(n);
  std::vector<double> age(n);
  std::vector<std::string> s_user, s_action, s_device;
  std::vector<double> s_duration;
  std::vector<bool> s_duration_missing;

  static const char* const kGenders[] = {"FEMALE", "MALE", "OTHER"};
  static const double kGenderW[] = {0.52, 0.46, 0.02};
  static const char* const kSignup[] = {"basic", "facebook", "google"};
  static const double kSignupW[][3] = {{0.62, 0.35, 0.03}, {0.78, 0.20, 0.02}};
  static const char* const kDevices[] = {"Mac Desktop", "Windows Desktop", "iPhone", "iPad", "Android Phone"};
  static const double kDeviceW[][5] = {{0.35, 0.30, 0.15, 0.08, 0.12}, {0.48, 0.32, 0.08, 0.08, 0.04}};
  static const char* const kBrowsers[] = {"Chrome", "Safari", "Firefox", "IE", "Mobile Safari"};
  static const double kBrowserW[] = {0.32, 0.22, 0.16, 0.10, 0.20};
  static const char* const kActions[] = {"view", "search", "click", "message_post"};
  static const double kActionW[] = {0.4, 0.3, 0.2, 0.1};
  static const char* const kSessionDevices[] = {"Desktop", "Phone", "Tablet"};
  static const double kSessionDeviceW[] = {0.6, 0.3, 0.1};

  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "u%07zu", i + 1);
    ids[i] = buf;
    double u = label_rng.uniform01();
    std::size_t k = 0;
    while (k + 1 < prior.labels.size() && u >= prior.proportions[static_cast<Index>(k)]) {
      u -= prior.proportions[static_cast<Index>(k)];
      ++k;
    }
    labels[i] = prior.labels[k];
    const int booked = k == 0 ? 0 : 1;

    age_missing[i] = user_rng.uniform01() < (booked ? age_missing_booked : age_missing_ndf);
    const double a = kAgeMean[booked] + 10.0 * user_rng.std_normal();
    age[i] = age_missing[i] ? 0.0 : std::round(std::clamp(a, 18.0, 90.0));
    gender_missing[i] = user_rng.uniform01() < logistic(kGenderMissingScore[booked]);
    gender[i] = pick(kGenders, kGenderW, user_rng);
    signup[i] = pick(kSignup, kSignupW[booked], user_rng);
    device[i] = pick(kDevices, kDeviceW[booked], user_rng);
    browser[i] = pick(kBrowsers, kBrowserW, user_rng);
    const std::string local = language_of(labels[i]);
    language[i] = (local != "en" && user_rng.uniform01() < logistic(kLocalLanguageScore)) ? local : "en";
    if (user_rng.uniform01() < 0.03) language[i] = "zh";

    if (session_rng.uniform01() < logistic(kNoSessionScore[booked])) continue;
    const Index count = 1 + poisson(kSessionMean[booked] - 1, session_rng);
    const double p_request = logistic(kBookingRequestScore[booked]);
    for (Index s = 0; s < count; ++s) {
      s_user.push_back(ids[i]);
      s_action.push_back(session_rng.uniform01() < p_request ? "booking_request"
                                                             : pick(kActions, kActionW, session_rng));
      s_device.push_back(pick(kSessionDevices, kSessionDeviceW, session_rng));
      const bool dm = session_rng.uniform01() < 0.02;
      const double mu = booked ? 5.4 : 5.0;
      s_duration.push_back(dm ? 0.0 : std::round(std::exp(mu + session_rng.std_normal())));
      s_duration_missing.push_back(dm);
    }
  }

  SynthData out;
  out.users.add_column(Column::categorical("id", ids));
  out.users.add_column(Column::numeric("age", age, age_missing));
  out.users.add_column(Column::categorical("gender", gender, gender_missing));
  out.users.add_column(Column::categorical("signup_method", signup));
  out.users.add_column(Column::categorical("language", language));
  out.users.add_column(Column::categorical("first_device_type", device));
  out.users.add_column(Column::categorical("first_browser", browser));
  out.users.add_column(Column::categorical("country_destination", labels));
  out.sessions.add_column(Column::categorical("user_id", std::move(s_user)));
  out.sessions.add_column(Column::categorical("action_type", std::move(s_action)));
  out.sessions.add_column(Column::categorical("device_type", std::move(s_device)));
  out.sessions.add_column(Column::numeric("duration", std::move(s_duration), std::move(s_duration_missing)));
  out.truth = std::move(labels);
  return out;
}

}  // namespace bayesdl::data
