# Generated by Django 5.2.5 on 2026-10-18 09:40

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('sweep', 'Sweep'), ('calibrate', 'Calibration'), ('cascade', 'Cascade')], max_length=10)),
                ('master_seed', models.CharField(max_length=20)),
                ('config', models.JSONField(default=dict)),
                ('output', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='SweepPoint',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('position', models.PositiveIntegerField()),
                ('p_err', models.FloatField()),
                ('n', models.PositiveIntegerField(null=True)),
                ('k', models.PositiveIntegerField(null=True)),
                ('s', models.PositiveIntegerField(null=True)),
                ('p', models.PositiveIntegerField(null=True)),
                ('rate', models.FloatField(null=True)),
                ('frames', models.PositiveIntegerField(default=0)),
                ('frame_errors', models.PositiveIntegerField(default=0)),
                ('leak_bits', models.FloatField(null=True)),
                ('f_code', models.FloatField(null=True)),
                ('f_orig', models.FloatField(null=True)),
                ('f_eff', models.FloatField(null=True)),
                ('key_bound_bits', models.FloatField(null=True)),
                ('status', models.CharField(default='ok', max_length=12)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='points', to='experiments.experimentrun')),
            ],
            options={
                'ordering': ['run', 'position'],
            },
        ),
    ]
