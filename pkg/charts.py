"""
Figures from exported CSV files.

    python charts.py trace.csv out.png
    python charts.py --schedule schedule.csv out.png
"""

import argparse

import numpy as np
import pandas as pd
from matplotlib.figure import Figure


def _positive(series: pd.Series) -> pd.Series:
    """log axes drop zeros and NaNs"""
    return series.where(series > 0)


def create_trace_figure(df: pd.DataFrame, title: str = "") -> Figure:
    """Distances, KKT residuals, Lyapunov values and per-step slack of one run."""
    fig = Figure(figsize=(10, 8), dpi=100)
    ax1 = fig.add_subplot(311)  # distances / residuals
    ax2 = fig.add_subplot(312)  # Lyapunov or rate bound
    ax3 = fig.add_subplot(313)  # slack

    k = df['k']
    for col, color in (('dist_x', 'blue'), ('dist_z', 'orange'), ('dist_y', 'green')):
        if df[col].notna().any():
            ax1.semilogy(k, _positive(df[col]), label=col, color=color)
    ax1.semilogy(k, _positive(df['kkt_primal']), label='kkt_primal', color='purple', linestyle='--')
    ax1.semilogy(k, _positive(df['kkt_dual']), label='kkt_dual', color='red', linestyle='--')

    if 'lhs_rate' in df.columns and df['lhs_rate'].notna().any():
        ax2.plot(k, df['lhs_rate'], label='rate bound lhs', color='blue')
        ax2.plot(k, df['rhs_rate'], label='rate bound rhs', color='red', linestyle='--')
        slack = df['rhs_rate'] - df['lhs_rate']
    else:
        ax2.semilogy(k, _positive(df['lyapunov']), label='Lyapunov', color='blue')
        slack = df['fejer_slack']

    if slack.notna().any():
        ax3.plot(k, slack, color='purple', label='slack')
        ax3.axhline(y=0, color='r', linestyle='--', alpha=0.5)

    ax1.set_title(title or 'Iterates')
    ax1.set_ylabel('distance / residual')
    ax1.grid(True)
    ax1.legend()

    ax2.set_title('Certificate value')
    ax2.grid(True)
    ax2.legend()

    ax3.set_title('Certificate slack')
    ax3.set_xlabel('k')
    ax3.grid(True)
    if slack.notna().any():
        ax3.legend()

    fig.tight_layout()
    return fig


def create_schedule_figure(df: pd.DataFrame, title: str = "") -> Figure:
    """tau_k, sigma_k and theta_k on log-log axes, with n tau_n against its limit."""
    fig = Figure(figsize=(10, 6), dpi=100)
    ax1 = fig.add_subplot(211)
    ax2 = fig.add_subplot(212)

    k = df['k']
    ax1.loglog(k[k > 0], df['tau_k'][k > 0], label='tau_k', color='blue')
    ax1.loglog(k[k > 0], df['sigma_k'][k > 0], label='sigma_k', color='green')
    ax1.loglog(k[k > 0], df['theta_k'][k > 0], label='theta_k', color='orange')
    ax2.semilogx(k[k > 0], df['n_tau_n'][k > 0], label='n tau_n', color='purple')
    if 'limit' in df.columns and df['limit'].notna().any():
        ax2.axhline(y=float(df['limit'].iloc[0]), color='r', linestyle='--', alpha=0.5,
                    label='lambda / gamma')

    ax1.set_title(title or 'Step-size schedule')
    ax1.grid(True)
    ax1.legend()
    ax2.set_xlabel('k')
    ax2.grid(True)
    ax2.legend()

    fig.tight_layout()
    return fig


def create_battery_figure(df: pd.DataFrame, tol: float = 1e-9) -> Figure:
    """Max deviation per reduction and problem as grouped bars on a log scale."""
    table = df.groupby(['reduction', 'problem'])['max_deviation'].max().unstack('problem')
    fig = Figure(figsize=(10, 4), dpi=100)
    ax = fig.add_subplot(111)
    width = 0.8 / max(len(table.columns), 1)
    x = np.arange(len(table.index))
    for i, problem in enumerate(table.columns):
        values = table[problem].clip(lower=1e-18)
        ax.bar(x + i * width, values, width=width, label=problem, alpha=0.7)
    ax.axhline(y=tol, color='r', linestyle='--', alpha=0.5)
    ax.set_yscale('log')
    ax.set_xticks(x + 0.4 - width / 2)
    ax.set_xticklabels(table.index, rotation=20)
    ax.set_ylabel('max deviation')
    ax.set_title('Direct scheme vs engine configuration')
    ax.grid(True)
    ax.legend(fontsize='small')
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="charts", description="Render exported CSV files.")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--schedule", action="store_true", help="input is a schedule CSV")
    group.add_argument("--battery", action="store_true", help="input is a reduction battery CSV")
    parser.add_argument("csv")
    parser.add_argument("out")
    args = parser.parse_args(argv)

    df = pd.read_csv(args.csv)
    if args.schedule:
        fig = create_schedule_figure(df)
    elif args.battery:
        fig = create_battery_figure(df)
    else:
        fig = create_trace_figure(df)
    fig.savefig(args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
