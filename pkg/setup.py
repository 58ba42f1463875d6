from setuptools import setup, find_packages

setup(
    name='pragmatic',
    version='0.1',
    packages=find_packages(exclude=['tests']),
    package_data={'pragmatic': ['data/*.json']},
    install_requires=[
        'click~=7.1.2',
        'click-pathlib~=2020.3.13.0',
        'numpy>=1.17',
        'pandas>=1.5',
        'PyYAML>=6.0',
        'tqdm>=4.50.0',
    ],
    extras_require={
        'test': [
            'pytest>=6.0',
            'hypothesis>=6.0',
        ],
    },
    entry_points='''
        [console_scripts]
        pragmatic=pragmatic.cli:pragmatic
    ''',
)
