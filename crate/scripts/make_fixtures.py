#!/usr/bin/env python3
"""Writes the fixture files under fixtures/. Output is deterministic."""

import csv
import io
import json
import os

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")


def doc(doc_id, family, year, title, abstract, claims, description=None, status="granted"):
    d = {
        "doc_id": doc_id,
        "family_id": family,
        "filing_year": year,
        "title": title,
        "abstract": abstract,
        "claims": claims,
        "cpc_codes": ["Y02P 80/10"],
        "ipc_codes": ["G05B 15/02"],
        "status": status,
    }
    if description is not None:
        d["description"] = description
    return d


# Documents matched by the energy management query.
SET_DOCS = [
    doc("E01", "F01", 2006, "Energy management system for an industrial plant",
        "An energy management system monitors the consumption of an industrial plant. "
        "The system controls devices such as heat pumps and power converters.",
        ["1. An energy management system comprising a controller and a light sensor."]),
    doc("E02", "F02", 2008, "Method of energy management for a factory",
        "The method of energy management schedules the loads of a factory. "
        "Boilers, heat exchangers and other heating units are switched by the controller.",
        ["1. A method of energy management comprising the step of measuring the load."],
        "The controller can analyze energy consumption of buildings and plants."),
    doc("E03", "F03", 2009, "Energy management apparatus with thermal storage",
        "An energy management apparatus stores heat in a tank. "
        "The apparatus operates systems such as heat pumps, boilers and solar collectors.",
        ["1. An energy management apparatus comprising a tank.",
         "2. The apparatus of claim 1, wherein the tank is insulated."]),
    doc("E04", "F03", 2011, "Energy management apparatus with thermal storage",
        "An energy management apparatus stores heat in a tank. "
        "The apparatus operates systems such as heat pumps and solar collectors.",
        ["1. An energy management apparatus comprising a tank and a heat pump."]),
    doc("E05", "F04", 2010, "Power electronics for energy management",
        "A power module for energy management in a workshop. "
        "The module includes devices such as power converters, inverters and smart meters.",
        ["1. A power module for energy management comprising a power converter."]),
    doc("E06", "F05", 2011, "Energy management of compressed air",
        "The invention concerns energy management of compressed air networks. "
        "Compressors, dryers and other machines are coordinated to save energy.",
        ["1. A method of energy management for a compressed air network."]),
    doc("E07", "F06", 2012, "Energy management controller for buildings",
        "An energy management controller regulates heating and cooling. "
        "The controller drives units such as heat pumps, air conditioning and plate heat exchangers.",
        ["1. An energy management controller comprising a processor."],
        "The controller can analyze energy consumption of the buildings and the plant."),
    doc("E08", "F07", 2012, "Energy management with photovoltaic generation",
        "The energy management unit balances photovoltaic generation and demand. "
        "The plant includes photovoltaic panels, power converters and other devices.",
        ["1. An energy management unit comprising a power converter."]),
    doc("E09", "F07", 2014, "Energy management with photovoltaic generation",
        "The energy management unit balances photovoltaic generation and demand. "
        "The plant includes photovoltaic panels, inverters and other devices.",
        ["1. An energy management unit comprising an inverter."]),
    doc("E10", "F08", 2013, "Lighting energy management",
        "A lighting energy management system for a warehouse. "
        "The system uses sensors, especially light sensors and occupancy sensors.",
        ["1. A lighting energy management system comprising a light sensor."],
        "Engineers install photovoltaic systems on the roof of the warehouse."),
    doc("E11", "F09", 2014, "Energy management of heat recovery",
        "Energy management of heat recovery in a foundry. "
        "Heat is recovered by such devices as heat exchangers and heat pumps.",
        ["1. A method of energy management comprising recovering heat."]),
    doc("E12", "F10", 2015, "Predictive energy management",
        "A predictive energy management system forecasts the demand of a plant. "
        "The forecast drives apparatus including heat pumps and air conditioning.",
        ["1. A predictive energy management system comprising a forecaster."],
        "The system can analyze the energy consumption of plants and buildings."),
    doc("E13", "F10", 2016, "Predictive energy management",
        "A predictive energy management system forecasts the demand of a plant. "
        "The forecast drives apparatus including heat pumps, air conditioning and boilers.",
        ["1. A predictive energy management system comprising a forecaster and a boiler."]),
    doc("E14", "F11", 2017, "Energy management for data centres",
        "An energy management method for a data centre. "
        "Servers, chillers and other units are scheduled according to the load.",
        ["1. An energy management method comprising scheduling servers."],
        "The operators monitor energy consumption with smart meters."),
    doc("E15", "F12", 2018, "Energy management of heat pump fleets",
        "An energy management platform aggregates heat pumps of many sites. "
        "The platform dispatches machines such as heat pumps and chillers.",
        ["1. An energy management platform comprising an aggregator."]),
    doc("E16", "F12", 2019, "Energy management of heat pump fleets",
        "An energy management platform aggregates heat pumps of many sites. "
        "The platform dispatches machines such as heat pumps, chillers and boilers.",
        ["1. An energy management platform comprising an aggregator and a scheduler."]),
    doc("E17", "F13", 2019, "Smart grid interface for a plant",
        "A Smart Grid interface for a plant shifts flexible loads. "
        "The interface controls systems such as heat pumps and battery storage.",
        ["1. An interface comprising a communication module."],
        "The engineers design solar energy systems for the plant."),
    doc("E18", "F14", 2020, "Demand response in a smart grid",
        "A demand response method in a smart grid. "
        "Loads such as heat pumps are shifted by the network operator.",
        ["1. A demand response method comprising receiving a price signal."]),
    doc("E19", "F15", 2021, "Energy management for athletes",
        "A method of energy management for athletes using a nutrition plan. "
        "The method uses systems such as nutrition plans and wearable trackers.",
        ["1. A method of energy management comprising weighing an athlete."]),
    doc("E20", "F16", 2022, "Personal energy management of athletes",
        "A personal energy management method for athletes. "
        "Fatigue is estimated by devices such as wearable trackers.",
        ["1. A method of energy management comprising recording the fatigue of an athlete."]),
]

# Mention energy management and vehicles: excluded by the query.
VEHICLE_DOCS = [
    doc("X01", "F17", 2012, "Energy management of an electric vehicle",
        "An energy management method for an electric vehicle. "
        "The vehicle uses devices such as power converters and batteries.",
        ["1. A method of energy management for a vehicle."]),
    doc("X02", "F18", 2014, "Vehicle energy management",
        "Energy management in a hybrid vehicle with heat pumps.",
        ["1. A vehicle comprising a heat pump."]),
    doc("X03", "F19", 2016, "Charging energy management",
        "Energy management of vehicle charging stations.",
        ["1. A charging station comprising a power converter."]),
    doc("X04", "F20", 2018, "Fleet energy management",
        "Energy management for a fleet of vehicles.",
        ["1. A method comprising routing vehicles."]),
    doc("X05", "F21", 2020, "Energy management in railway vehicles",
        "Energy management for railway vehicles with regenerative braking.",
        ["1. A railway vehicle comprising a braking resistor."]),
]

OTHER_TOPICS = [
    ("Loom with a tensioning device", "A weaving loom with a yarn tensioning device.", "1. A loom comprising a tensioner."),
    ("Seed drill", "A seed drill for arable land with a metering wheel.", "1. A seed drill comprising a hopper."),
    ("Food tray sealing", "A sealing station for food trays.", "1. A sealing station comprising a heated die."),
    ("Catheter tip", "A catheter with a flexible tip.", "1. A catheter comprising a tip."),
    ("Bicycle gear hub", "A gear hub for a bicycle.", "1. A gear hub comprising planetary gears."),
    ("Coffee grinder burr", "A conical burr for a coffee grinder.", "1. A grinder comprising a burr."),
    ("Window hinge", "A concealed hinge for a window sash.", "1. A hinge comprising a pivot."),
    ("Paint roller", "A paint roller with a replaceable sleeve.", "1. A roller comprising a sleeve."),
    ("Fishing reel", "A fishing reel with a drag mechanism.", "1. A reel comprising a spool."),
    ("Shoe sole", "A shoe sole with cushioning cells.", "1. A sole comprising cells."),
    ("Pallet wrapping", "A pallet wrapping machine with a rotating arm.", "1. A wrapping machine comprising an arm."),
    ("Heat pump dryer for laundry", "A laundry dryer with a heat pump.", "1. A dryer comprising a heat pump."),
    ("Greenhouse vent", "A greenhouse vent opener.", "1. A vent opener comprising a piston."),
    ("Toothbrush head", "A toothbrush head with angled bristles.", "1. A head comprising bristles."),
    ("Concrete formwork", "A reusable formwork panel for concrete walls.", "1. A panel comprising a frame."),
    ("Beehive frame", "A frame for a beehive.", "1. A frame comprising wax foundation."),
    ("Ski binding", "A ski binding with a release mechanism.", "1. A binding comprising a heel piece."),
    ("Tea infuser", "A tea infuser with a mesh basket.", "1. An infuser comprising a basket."),
    ("Printer cartridge", "An ink cartridge for an inkjet printer.", "1. A cartridge comprising a chip."),
    ("Garden hose reel", "A hose reel with an automatic rewind.", "1. A reel comprising a spring."),
    ("Violin chin rest", "A chin rest for a violin.", "1. A chin rest comprising a clamp."),
    ("Camera tripod", "A tripod with telescopic legs.", "1. A tripod comprising legs."),
    ("Mattress spring", "A pocket spring for a mattress.", "1. A spring comprising a pocket."),
    ("Water bottle cap", "A cap for a water bottle.", "1. A cap comprising a valve."),
    ("Knitting needle", "A circular knitting needle.", "1. A needle comprising a cable."),
]

# (family, years) for the other documents; four families hold two documents.
OTHER_FAMILIES = [
    ("F22", [2005, 2007]), ("F23", [2006]), ("F24", [2007]), ("F25", [2008, 2009]),
    ("F26", [2009]), ("F27", [2010]), ("F28", [2011]), ("F29", [2012, 2015]),
    ("F30", [2013]), ("F31", [2014]), ("F32", [2015]), ("F33", [2016, 2016]),
    ("F34", [2017]), ("F35", [2018]), ("F36", [2019]), ("F37", [2020]),
    ("F38", [2021]), ("F39", [2022]), ("F40", [2005]), ("F41", [2010]),
    ("F42", [2013]),
]


def other_docs():
    out = []
    slots = [(f, y) for f, ys in OTHER_FAMILIES for y in ys]
    assert len(slots) == len(OTHER_TOPICS) == 25
    for i, ((family, year), (title, abstract, claim)) in enumerate(zip(slots, OTHER_TOPICS)):
        out.append(doc(f"O{i + 1:02d}", family, year, title, abstract, [claim]))
    return out


def write(name, text):
    path = os.path.join(ROOT, name)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(text)


def corpus():
    docs = SET_DOCS + VEHICLE_DOCS + other_docs()
    assert len(docs) == 50
    assert len({d["family_id"] for d in docs}) == 42
    write("corpus.jsonl", "".join(json.dumps(d, ensure_ascii=False) + "\n" for d in docs))

    query = {
        "name": "energy_mgmt",
        "scope": ["title", "abstract", "claims", "description"],
        "expression": {
            "AND": [
                {"OR": [{"lit": "energy management"}, {"re": "(?i)\\bsmart grid\\b"}]},
                {"NOT": {"OR": [{"lit": "vehicle"}, {"lit": "railway"}]}},
            ]
        },
    }
    write("energy_mgmt.json", json.dumps(query, indent=2) + "\n")

    not_relevant = {"E19", "E20"} | {d["doc_id"] for d in other_docs()}
    rows = ["doc_id,relevant"] + [f"{d['doc_id']},{'false' if d['doc_id'] in not_relevant else 'true'}" for d in docs]
    write("labels.csv", "\n".join(rows) + "\n")
    write("seeds.txt", "E01\nE05\nE10\nE15\nE18\nX01\n")
    write("synonyms.tsv", "# synonym\tbase\nequipment\tdevice\nplant\tsystem\ncar\tvehicle\n")
    curation = [
        {"action": "reject", "target": "nutrition plan"},
        {"action": "reject", "target": "wearable tracker"},
        {"action": "merge", "target": "inverter", "into": "power converter"},
        {"action": "merge", "target": "plate heat exchanger", "into": "heat exchanger"},
        {"action": "approve", "target": "heat pump"},
    ]
    write("curation.json", json.dumps(curation, indent=2) + "\n")


GREEN_HARD = [
    ("advise on heating systems energy efficiency", "advise on the energy efficiency of heating systems in buildings and plants"),
    ("advise on utility consumption", "advise on the consumption of utilities such as heat, water and electricity"),
    ("analyze energy consumption", "analyze energy consumption of buildings and plants"),
    ("design air conditioning", "design air conditioning for buildings"),
    ("design solar energy systems", "design solar energy systems for plants"),
    ("design wind turbines", "design wind turbines, blades and towers"),
    ("inspect electrical supplies", "inspect electrical supplies for damage and moisture"),
    ("inspect wind turbines", "inspect wind turbines for faults"),
    ("install photovoltaic systems", "install photovoltaic systems on roofs"),
    ("install heat pumps", "install heat pumps in residential and industrial sites"),
    ("maintain heat exchangers", "maintain heat exchangers and clean their plates"),
    ("operate combined heat and power", "operate combined heat and power plants"),
]
OTHER_HARD = [
    ("read technical drawings", "read technical drawings and schematics"),
    ("perform welding", "perform arc welding on steel parts"),
    ("calibrate instruments", "calibrate measuring instruments in the laboratory"),
    ("troubleshoot electrical faults", "troubleshoot faults in electrical panels"),
    ("maintain compressors", "maintain industrial compressors and dryers"),
    ("plan maintenance schedules", "plan preventive maintenance schedules for machinery"),
    ("estimate project costs", "estimate the cost of engineering projects"),
    ("manage budgets", "manage the budget of a department"),
    ("negotiate supplier contracts", "negotiate contracts with suppliers"),
    ("apply safety regulations", "apply health and safety regulations on site"),
    ("write technical reports", "write technical reports for clients"),
    ("conduct energy audits", "conduct energy audits of industrial facilities"),
    ("assess environmental impact", "assess the environmental impact of operations"),
    ("develop sustainability strategies", "develop corporate sustainability strategies"),
    ("manage waste reduction", "manage waste reduction programmes"),
    ("supervise construction works", "supervise construction and installation works"),
    ("design electrical circuits", "design low voltage electrical circuits"),
    ("size hydraulic networks", "size hydraulic networks for heating"),
]
DIGITAL = [
    ("use building management software", "use building management software to set schedules"),
    ("program PLCs", "program programmable logic controllers"),
    ("analyse sensor data", "analyse sensor data streams from machines"),
    ("use CAD software", "use computer aided design software"),
    ("configure SCADA systems", "configure supervisory control and data acquisition systems"),
    ("use spreadsheets", "use spreadsheet software for calculations"),
    ("manage databases", "manage relational databases"),
    ("apply machine learning", "apply machine learning models to forecast demand"),
    ("secure industrial networks", "secure industrial communication networks"),
    ("use energy monitoring platforms", "use energy monitoring platforms and dashboards"),
    ("develop digital twins", "develop digital twins of plants"),
    ("use ERP systems", "use enterprise resource planning systems"),
    ("program in Python", "write programs in the Python language"),
    ("visualise data", "visualise data in reports and dashboards"),
    ("use IoT devices", "deploy and configure internet of things devices"),
]
SOFT = [
    ("teamwork", "work in a team towards shared goals"),
    ("communication", "communicate clearly with colleagues and clients"),
    ("problem solving", "solve problems systematically"),
    ("leadership", "lead and motivate people"),
    ("adaptability", "adapt to changing situations"),
    ("time management", "organise time and meet deadlines"),
    ("critical thinking", "evaluate arguments critically"),
    ("attention to detail", "pay attention to details"),
    ("negotiation", "negotiate agreements"),
    ("creativity", "generate original ideas"),
    ("customer orientation", "focus on the needs of customers"),
    ("self learning", "learn new subjects independently"),
    ("conflict management", "manage conflicts between people"),
    ("environmental awareness", "act with awareness of environmental consequences"),
    ("decision making", "take decisions under uncertainty"),
]


def skills():
    rows = []
    for i, (label, desc) in enumerate(GREEN_HARD + OTHER_HARD):
        rows.append((f"H{i + 1:02d}", label, desc, "hard", "true" if i < len(GREEN_HARD) else "false"))
    for i, (label, desc) in enumerate(DIGITAL):
        rows.append((f"G{i + 1:02d}", label, desc, "digital", "false"))
    for i, (label, desc) in enumerate(SOFT):
        rows.append((f"S{i + 1:02d}", label, desc, "soft", "false"))
    assert len(rows) == 60
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["skill_id", "label", "description", "category", "green"])
    w.writerows(rows)
    write("skills.csv", buf.getvalue())
    write("skill_overrides.json", json.dumps([{"skill_id": "H19", "action": "reject"}], indent=2) + "\n")


# Three blocks of four archetypes. Each archetype takes its block pool minus
# two skills, so within-block overlap is high and blocks share nothing.
BLOCKS = {
    "TechniciansOperators": {
        "pool": ["H09", "H10", "H11", "H12", "H13", "H14", "H15", "H16", "H17", "G01", "G02"],
        "soft": ["S01", "S03", "S05", "S08", "S12"],
        "archetypes": [
            ("T1", "Heat Pump Installer", "Installs and services heat pumps in residential and industrial sites."),
            ("T2", "Maintenance Technician", "Maintains heat exchangers, compressors and plant equipment."),
            ("T3", "Plant Operator", "Operates combined heat and power plants and monitors equipment."),
            ("T4", "Photovoltaic Technician", "Installs photovoltaic systems and inspects electrical supplies."),
        ],
    },
    "EngineeringProfessionals": {
        "pool": ["H01", "H03", "H04", "H05", "H06", "H29", "H30", "G03", "G04", "G05", "G11"],
        "soft": ["S02", "S03", "S07", "S10", "S11"],
        "archetypes": [
            ("E1", "Energy Engineer", "Designs new, efficient and clean ways to produce, transform and distribute energy."),
            ("E2", "HVAC Design Engineer", "Designs heating, ventilation and air conditioning for buildings."),
            ("E3", "Renewable Energy Engineer", "Designs solar energy systems and wind turbines."),
            ("E4", "Automation Engineer", "Designs control systems and programs automation for plants."),
        ],
    },
    "ManagersConsultants": {
        "pool": ["H02", "H19", "H20", "H21", "H24", "H25", "H26", "H27", "G06", "G10", "G12"],
        "soft": ["S02", "S04", "S06", "S09", "S15"],
        "archetypes": [
            ("M1", "Sustainability Manager", "Ensures the sustainability of business processes and reports on results."),
            ("M2", "Energy Manager", "Plans and manages the energy use of an organisation."),
            ("M3", "Energy Consultant", "Advises clients on energy efficiency and utility consumption."),
            ("M4", "ICT Manager for Environmental Sustainability", "Plans and manages environmental strategies for ICT networks."),
        ],
    },
}


def archetypes():
    out = []
    for class_name, block in BLOCKS.items():
        pool = block["pool"]
        for j, (aid, title, desc) in enumerate(block["archetypes"]):
            drop = {pool[(2 * j) % len(pool)], pool[(2 * j + 1) % len(pool)]}
            soft = {s: (j + k) % 4 + 1 for k, s in enumerate(block["soft"])}
            out.append({
                "archetype_id": aid,
                "title": title,
                "description": desc,
                "macro_class_topdown": class_name,
                "binary_skills": sorted(set(pool) - drop),
                "soft_targets": soft,
            })
    write("archetypes.json", json.dumps(out, indent=2) + "\n")
    return out


def assessments(archs):
    by_id = {a["archetype_id"]: a for a in archs}
    cases = []

    def add(aid, arch, selected, soft, created="2024-03-01T09:00:00Z"):
        cases.append({
            "assessment_id": aid,
            "archetype_id": arch,
            "selected_binary": sorted(selected),
            "soft_levels": soft,
            "created_at": created,
        })

    t1 = by_id["T1"]
    add("asm-01", "T1", t1["binary_skills"], dict(t1["soft_targets"]))
    add("asm-02", "T1", t1["binary_skills"][:4], {"S01": 1, "S03": 2})
    e1 = by_id["E1"]
    add("asm-03", "E1", e1["binary_skills"][:6] + ["H10"], {"S02": 4, "S03": 4, "S07": 0})
    add("asm-04", "E2", ["H01", "H03", "G03"], {"S10": 2})
    add("asm-05", "M1", by_id["M2"]["binary_skills"], dict(by_id["M2"]["soft_targets"]))
    add("asm-06", "M3", [], {})
    add("asm-07", "T3", ["H09", "H10", "H11", "H03", "H04", "G01"], {"S01": 3, "S05": 3, "S08": 1})
    add("asm-08", "E4", ["G03", "G04", "G05", "G11", "G06"], {"S07": 4, "S10": 4, "S11": 1})
    add("asm-09", "M4", ["H02", "H19", "H20", "G06", "G10", "H13"], {"S04": 2, "S09": 2, "S15": 4})
    add("asm-10", "T4", ["H12", "H13", "H14", "H15", "H16", "H17", "G01", "G02", "H29"], {"S12": 4})
    for c in cases:
        write(f"assessments/{c['assessment_id']}.json", json.dumps(c, indent=2) + "\n")


def main():
    corpus()
    skills()
    assessments(archetypes())


if __name__ == "__main__":
    main()
