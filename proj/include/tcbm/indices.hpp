#pragma once

#include "tcbm/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tcbm
{
	/// Growth ratio 2 - d + kappa of the index recursion.
	template <typename Scalar = long double>
	Scalar index_ratio(int d, Scalar kappa)
	{
		require(kappa > Scalar(d - 2), "kappa must exceed d - 2");
		return Scalar(2 - d) + kappa;
	}

	/// r_n = (2 - d + kappa)(r_{n-1} + 1), r_0 = 0.
	template <typename Scalar = long double>
	Scalar r_seq(int d, Scalar kappa, int n)
	{
		require(n >= 0, "r_seq: n must be nonnegative");
		const Scalar g = index_ratio(d, kappa);
		Scalar r = 0;
		for (int k = 1; k <= n; ++k)
			r = g * (r + 1);
		return r;
	}

	/// r_n as the geometric sum of g^l for l = 1..n.
	template <typename Scalar = long double>
	Scalar r_closed(int d, Scalar kappa, int n)
	{
		require(n >= 0, "r_closed: n must be nonnegative");
		const Scalar g = index_ratio(d, kappa);
		if (g == Scalar(1))
			return Scalar(n);
		return g * (Scalar(1) - std::pow(g, Scalar(n))) / (Scalar(1) - g);
	}

	/// q_{n,kappa,eps} = (r_n - eps r_{n-1})/(r_n + 1) - eps.
	template <typename Scalar = long double>
	Scalar q_index(int d, Scalar kappa, Scalar eps, int n)
	{
		require(n >= 1, "q_index: n must be at least 1");
		const Scalar rn = r_seq(d, kappa, n), rp = r_seq(d, kappa, n - 1);
		return (rn - eps * rp) / (rn + 1) - eps;
	}

	/// Supremum of admissible eps: (2 - d + kappa)/(3 - d + kappa).
	template <typename Scalar = long double>
	Scalar eps_bound(int d, Scalar kappa)
	{
		const Scalar g = index_ratio(d, kappa);
		return g / (g + 1);
	}

	/// a_n = (r_n + 1)/r_n.
	template <typename Scalar = long double>
	Scalar a_coef(int d, Scalar kappa, int n)
	{
		require(n >= 1, "a_coef: n must be at least 1");
		const Scalar r = r_seq(d, kappa, n);
		return (r + 1) / r;
	}

	/// b_n = r_n + 1.
	template <typename Scalar = long double>
	Scalar b_coef(int d, Scalar kappa, int n)
	{
		return r_seq(d, kappa, n) + 1;
	}

	/// eta = ((r_n + 1) q_n + 1 + eps r_n)/((2 - d + kappa)(r_n + 1) + 1).
	template <typename Scalar = long double>
	Scalar eta_next(int d, Scalar kappa, Scalar eps, int n)
	{
		require(eps > 0 && eps < eps_bound(d, kappa), "eta_next: eps out of range");
		require(n >= 1, "eta_next: n must be at least 1");
		const Scalar g = index_ratio(d, kappa);
		const Scalar r = r_seq(d, kappa, n);
		const Scalar q = q_index(d, kappa, eps, n);
		return ((r + 1) * q + 1 + eps * r) / (g * (r + 1) + 1);
	}

	template <typename Scalar = long double>
	struct LimitExponent
	{
		Scalar exponent;  // ((2 - d + kappa) ^ 1) - eps
		Scalar r_limit;   // lim r_n, infinite when 2 - d + kappa >= 1
		bool r_diverges;
	};

	template <typename Scalar = long double>
	LimitExponent<Scalar> limit_exponent(int d, Scalar kappa, Scalar eps)
	{
		require(eps >= 0 && eps < eps_bound(d, kappa), "limit_exponent: eps out of range");
		const Scalar g = index_ratio(d, kappa);
		LimitExponent<Scalar> out;
		out.exponent = std::min(g, Scalar(1)) - eps;
		out.r_diverges = g >= Scalar(1);
		out.r_limit = out.r_diverges ? std::numeric_limits<Scalar>::infinity() : g / (Scalar(1) - g);
		return out;
	}

	/// Smallest depth n whose slackened index q_{n,kappa,eps/3} reaches the limit exponent.
	template <typename Scalar = long double>
	int min_depth(int d, Scalar kappa, Scalar eps, int n_max = 100000)
	{
		const Scalar target = limit_exponent(d, kappa, eps).exponent;
		const Scalar slack = eps / 3;
		const Scalar g = index_ratio(d, kappa);
		Scalar r_prev = 0, r = g;
		for (int n = 1; n <= n_max; ++n)
		{
			const Scalar q = (r - slack * r_prev) / (r + 1) - slack;
			if (q >= target)
				return n;
			r_prev = r;
			r = g * (r + 1);
		}
		throw DomainError("min_depth: no admissible depth below the scan limit");
	}

	template <typename Scalar = long double>
	struct ExponentRow
	{
		int n;
		Scalar r, q, a, b, eta;
	};

	template <typename Scalar = long double>
	struct ExponentTable
	{
		int d;
		Scalar kappa;
		Scalar eps;
		std::vector<ExponentRow<Scalar>> rows;
	};

	template <typename Scalar = long double>
	ExponentTable<Scalar> exponent_table(int d, Scalar kappa, Scalar eps, int n_rows)
	{
		require(n_rows >= 1, "exponent_table: need at least one row");
		ExponentTable<Scalar> table{d, kappa, eps, {}};
		const bool eta_defined = eps > 0 && eps < eps_bound(d, kappa);
		for (int n = 1; n <= n_rows; ++n)
		{
			ExponentRow<Scalar> row;
			row.n = n;
			row.r = r_seq(d, kappa, n);
			row.q = q_index(d, kappa, eps, n);
			row.a = a_coef(d, kappa, n);
			row.b = b_coef(d, kappa, n);
			row.eta = eta_defined ? eta_next(d, kappa, eps, n) : std::numeric_limits<Scalar>::quiet_NaN();
			table.rows.push_back(row);
		}
		return table;
	}
} // namespace tcbm
