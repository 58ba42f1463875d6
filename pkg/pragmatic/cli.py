import json
from pathlib import Path

import click
import click_pathlib
import yaml

from pragmatic.bandit import sweep, windowed_sweep, simulate_plays, check_payout, SweepMode
from pragmatic.dist import as_dist, as_prior, kl_divergence
from pragmatic.ensemble import decompose, definitive_upper_bound, is_pragmatically_definitive, \
    definitive_phi, per_message_info, partition_pragmatic_info
from pragmatic.ergodic import MessageSource, SourceKind, sample_trajectory
from pragmatic.errors import PragmaticError, InvalidParameterError, PropertyViolationError, \
    SchemaError
from pragmatic.joint import joint_pragmatic_info, marginal_phi_delta, marginal_phi_delta_prime, \
    conditional_pragmatic_info, chain_rule_residual, cross_message_information, \
    check_pragmatic_independence
from pragmatic.report import RunReport, render_frame, sweep_frame
from pragmatic.resources import read_distribution, read_ensemble, read_joint, read_transition, \
    dumps
from pragmatic.utils import Context, Config, OutputFormat, fmt, task
from pragmatic.verify import verification_steps, summarise, EXACT, IDENTITY

DEFAULT_CONFIG = Path('pragmatic.yml')


def setup(config_path=None, out=None, output_format=OutputFormat.CSV):
    """
    Create a new Context using the YAML config file at the given path. With no path the default
    pragmatic.yml in the working directory is used if there is one, otherwise every option takes
    its default value.

    :param config_path: the config file's path, or None
    :param out: the Path to write data output to, or None for stdout
    :param output_format: the OutputFormat for data output
    :return: a Context object
    """
    if config_path is None and DEFAULT_CONFIG.exists():
        config_path = DEFAULT_CONFIG
    options = {}
    if config_path is not None:
        with open(config_path, 'r') as f:
            options = yaml.safe_load(f) or {}
        if not isinstance(options, dict):
            raise SchemaError(config_path, 'the config must be a mapping of options')
    return Context(Config(**options), out, OutputFormat(output_format))


class PragmaticGroup(click.Group):
    """
    A click Group that turns PragmaticErrors escaping a command into a red message on stderr and
    the error's exit code.
    """

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except PragmaticError as e:
            click.secho(str(e), fg='red', err=True)
            ctx.exit(e.exit_code)


def validate_payout(ctx, param, value):
    try:
        check_payout(value)
    except InvalidParameterError as e:
        raise click.BadParameter(str(e))
    return value


def resolve(context, value, config_option, default):
    """
    Command line options win over config options, which win over the default.
    """
    return value if value is not None else context.config.opt(config_option, default)


def finish(context, report):
    """
    Emits the report and fails the command if any of its checks didn't pass.
    """
    context.emit(report.render(context.output_format))
    if not report.ok:
        raise PropertyViolationError(', '.join(report.failures), report.to_dict())


@click.group(cls=PragmaticGroup)
@click.option('-c', '--config', 'config_path', type=click_pathlib.Path(exists=True, dir_okay=False),
              default=None, show_default='pragmatic.yml in the working directory, if present')
@click.option('-o', '--out', type=click_pathlib.Path(dir_okay=False), default=None,
              help='write data output to this file instead of stdout')
@click.option('--format', 'output_format', type=click.Choice([f.value for f in OutputFormat]),
              default=OutputFormat.CSV.value, show_default=True)
@click.pass_context
def pragmatic(ctx, config_path, out, output_format):
    ctx.obj = setup(config_path, out, output_format)


@pragmatic.command()
@click.argument('file_p', type=click_pathlib.Path(exists=True, dir_okay=False))
@click.argument('file_q', type=click_pathlib.Path(exists=True, dir_okay=False))
@click.pass_obj
def kl(context, file_p, file_q):
    """
    Prints the Kullback-Leibler divergence D(p||q), in bits, of the distribution in FILE_P from the
    strictly positive distribution in FILE_Q.
    """
    p = as_dist(read_distribution(file_p))
    q = as_prior(read_distribution(file_q))
    divergence = kl_divergence(p, q)
    if context.output_format == OutputFormat.JSON:
        context.emit(json.dumps({'D': float(fmt(divergence))}))
    else:
        context.emit(fmt(divergence))


@pragmatic.command()
@click.argument('file', type=click_pathlib.Path(exists=True, dir_okay=False))
@click.pass_obj
def ensemble(context, file):
    """
    Reports the pragmatic information of the message ensemble in FILE, its decomposition into
    mutual information and prior update, the upper bound for its prior and which of its messages
    are definitive. If the messages have usefulness labels the partition by usefulness is reported
    too.
    """
    e, usefulness = read_ensemble(file)
    report = RunReport('ensemble')
    report.add_input(file)

    decomposition = decompose(e)
    bound = definitive_upper_bound(e.prior)
    report.add_quantity('Phi', decomposition.phi, 'pragmatic information of the ensemble')
    report.add_quantity('I', decomposition.mutual_info, 'mutual information of messages and '
                                                        'outcomes')
    report.add_quantity('D_prior_update', decomposition.prior_update,
                        'divergence of the average posterior from the prior')
    report.add_quantity('bound', bound, 'largest possible pragmatic information, max -log2 q_i')
    for label, amount in zip(e.labels, per_message_info(e)):
        report.add_quantity(f'D[{label}]', amount, 'pragmatic information of the message')

    definitiveness = is_pragmatically_definitive(e)
    for label, flag in zip(e.labels, definitiveness.messages):
        report.add_flag(f'definitive[{label}]', flag, 'posterior is a unit vector')
    report.add_flag('definitive', definitiveness.ensemble, 'every message is definitive')
    if definitiveness.ensemble:
        report.add_quantity('Phi_definitive', definitive_phi(e),
                            '-sum phi_m log2 q_k(m) for a definitive ensemble')

    report.add_check('decomposition', decomposition.residual, IDENTITY, 'Phi - I - D_prior_update')
    report.add_check('upper_bound', decomposition.phi - bound, EXACT, 'Phi - bound',
                     passed=decomposition.phi <= bound + EXACT)

    if usefulness is not None:
        partition = partition_pragmatic_info(e, usefulness)
        report.add_quantity('Phi_irrelevant', partition.irrelevant, 'from irrelevant messages')
        report.add_quantity('Phi_disinformative', partition.disinformative,
                            'from disinformative messages')
        report.add_quantity('Phi_useful', partition.useful, 'from useful messages')
        report.add_check('partition', partition.total - decomposition.phi, EXACT,
                         'sum of the parts - Phi')
    finish(context, report)


@pragmatic.command()
@click.argument('file', type=click_pathlib.Path(exists=True, dir_okay=False))
@click.pass_obj
def joint(context, file):
    """
    Reports the joint, marginal and conditional pragmatic information of the joint ensemble in
    FILE, checks the chain rule and tests the two decision makers for pragmatic independence.
    """
    j = read_joint(file)
    report = RunReport('joint')
    report.add_input(file)

    residual = chain_rule_residual(j)
    cross = cross_message_information(j)
    independence = check_pragmatic_independence(j)
    report.add_quantity('Phi_joint', joint_pragmatic_info(j), 'both ensembles on both decision '
                                                              'makers')
    report.add_quantity('Phi_delta', marginal_phi_delta(j), "Delta's own ensemble")
    report.add_quantity('Phi_delta_prime', marginal_phi_delta_prime(j),
                        "Delta prime's own ensemble")
    report.add_quantity('Phi_conditional', conditional_pragmatic_info(j),
                        "m' acting on Delta' given Delta's message and outcome")
    report.add_quantity('chain_residual', residual, 'Phi_joint - Phi_delta - Phi_conditional')
    report.add_quantity('cross_info', cross, "what m' tells Delta beyond m")
    report.add_quantity('additivity_gap', independence.gap,
                        'Phi_joint - Phi_delta - Phi_delta_prime')
    report.add_flag('sufficient', independence.sufficient, 'priors and joint factorise')
    report.add_flag('additive', independence.additive, independence.verdict.value)

    report.add_check('chain_rule', residual - cross, IDENTITY, 'chain_residual - cross_info')
    report.add_check('sufficient_condition', independence.gap, IDENTITY,
                     'factorisation implies additivity', passed=independence.consistent)
    finish(context, report)


@pragmatic.command()
@click.option('--pi', type=float, required=True, callback=validate_payout,
              help='the true payout probability, strictly between 0 and 1')
@click.option('--t-max', type=click.IntRange(min=0), default=None,
              help='the last number of plays to include [default: 200]')
@click.option('--mode', type=click.Choice([mode.value for mode in SweepMode]),
              default=SweepMode.CONTINUOUS.value, show_default=True,
              help='whether the most likely win count pi * T is kept real or rounded')
@click.option('--window', type=click.IntRange(min=1), default=None,
              help='only remember this many plays, along a simulated history (ignores --mode)')
@click.option('--seed', type=int, default=0, show_default=True,
              help='seed for the simulated history used with --window')
@click.pass_obj
def bandit(context, pi, t_max, mode, window, seed):
    """
    Writes the pragmatic information of each play of a one armed bandit with payout probability
    PI, for T = 0 to T_MAX earlier plays, as CSV.
    """
    t_max = resolve(context, t_max, 'bandit.t_max', 200)
    if window is None:
        rows = sweep(pi, t_max, SweepMode(mode))
    else:
        rows = windowed_sweep(simulate_plays(pi, t_max, seed), window, pi)
    context.emit(render_frame(sweep_frame(rows), context.output_format))

    phis = [row.phi for row in rows]
    decreasing = all(current > following for current, following in zip(phis, phis[1:]))
    click.echo(f'phi(T=0) = {fmt(phis[0])}, phi(T={t_max}) = {fmt(phis[-1])}, '
               f'strictly decreasing: {"yes" if decreasing else "no"}', err=True)


@pragmatic.command()
@click.argument('file', type=click_pathlib.Path(exists=True, dir_okay=False))
@click.option('--source', type=click.Choice([kind.value for kind in SourceKind]),
              default=SourceKind.IID.value, show_default=True)
@click.option('--n', type=click.IntRange(min=1), default=None,
              help='the number of messages to sample [default: 100000]')
@click.option('--seed', type=int, default=None, help='the generator seed [default: 42]')
@click.option('--transition', type=click_pathlib.Path(exists=True, dir_okay=False), default=None,
              help='the transition matrix file, required for a markov source')
@click.pass_obj
def simulate(context, file, source, n, seed, transition):
    """
    Samples messages from the ensemble in FILE and writes the running average of their pragmatic
    information as CSV, N = 1, 2, 5, 10, 20, 50...
    """
    e, _ = read_ensemble(file)
    n = resolve(context, n, 'simulate.n', 100000)
    seed = resolve(context, seed, 'simulate.seed', 42)
    if SourceKind(source) == SourceKind.MARKOV:
        if transition is None:
            raise click.UsageError('--transition is required with --source markov')
        src = MessageSource.markov(read_transition(transition), seed)
    else:
        src = MessageSource.iid(e.message_probs, seed)

    with task(f'Sampling {n} messages'):
        trajectory = sample_trajectory(e, src, n)
    context.emit(render_frame(trajectory.to_frame(), context.output_format, trajectory.metadata))

    target = decompose(e).phi
    click.echo(f'Phi_N = {fmt(trajectory.final)}, Phi = {fmt(target)}, '
               f'gap = {fmt(abs(trajectory.final - target))}', err=True)


@pragmatic.command()
@click.option('--trials', type=click.IntRange(min=1), default=None,
              help='random instances per check [default: 100]')
@click.option('--seed', type=int, default=None, help='the suite seed [default: 7]')
@click.option('--max-dim', type=click.IntRange(min=2), default=None,
              help='largest outcome and message count of the random instances [default: 5]')
@click.pass_obj
def verify(context, trials, seed, max_dim):
    """
    Runs the randomised verification suite and reports how many instances of each property
    passed. The first counterexample found is printed as JSON on stderr.
    """
    trials = resolve(context, trials, 'verify.trials', 100)
    seed = resolve(context, seed, 'verify.seed', 7)
    max_dim = resolve(context, max_dim, 'verify.max_dim', 5)

    results = context.run_steps(verification_steps(trials, seed, max_dim))
    report = summarise(results)
    context.emit(report.render(context.output_format))

    failed = [result for result in results if not result.ok]
    if failed:
        click.echo(dumps(failed[0].counterexample), err=True)
        raise PropertyViolationError(failed[0].name, failed[0].counterexample)


if __name__ == '__main__':
    # for dev!
    pragmatic()
