#!/usr/bin/env python3
"""Writes the synthetic evaluation corpus: one page per exception scenario.

Each page plants a single relevant section (prose, the stack trace and the
offending code) among navigation, sidebar, advert, footer and off-topic
article blocks. gold.txt holds the text of the planted section.

    python3 tools/gen_corpus.py data/corpus
"""

import html
import json
import random
import shutil
import sys
from pathlib import Path

SCENARIOS = [
    dict(exc="java.io.EOFException", msg=None,
         frames=["java.io.ObjectInputStream$PeekInputStream.readFully(ObjectInputStream.java:2325)",
                 "java.io.ObjectInputStream$BlockDataInputStream.readShort(ObjectInputStream.java:2794)",
                 "java.io.ObjectInputStream.readStreamHeader(ObjectInputStream.java:801)",
                 "java.io.ObjectInputStream.<init>(ObjectInputStream.java:299)",
                 "core.MyEOFTest.main(MyEOFTest.java:40)"],
         code="FileInputStream fis = new FileInputStream(file);\nObjectInputStream ois = new ObjectInputStream(fis);\n"
              "ArrayList<Record> currentList = new ArrayList<>();\nint size = ois.readInt();\n"
              "for (int i = 0; i < size; i++) {\n    Record current = (Record) ois.readObject();\n    currentList.add(current);\n}",
         title="EOFException when opening an ObjectInputStream on an empty file",
         prose=["The ObjectInputStream constructor reads the stream header immediately, so an empty file fails before readInt is ever called.",
                "Check the file length first or write the header by creating an ObjectOutputStream when the file is created."]),
    dict(exc="java.lang.NullPointerException", msg="Cannot invoke \"String.length()\" because \"name\" is null",
         frames=["com.shop.cart.CartService.totalFor(CartService.java:58)",
                 "com.shop.cart.CartController.show(CartController.java:31)",
                 "com.shop.App.main(App.java:12)"],
         code="String name = customer.getNickname();\nint width = name.length();\nCartLine line = cart.firstLine();\nline.render(width);",
         title="NullPointerException in CartService.totalFor when nickname is missing",
         prose=["getNickname returns null for customers created before the profile migration, so name.length() throws.",
                "Guard the call with Objects.requireNonNullElse or fall back to the customer email when the nickname is absent."]),
    dict(exc="java.lang.ArrayIndexOutOfBoundsException", msg="Index 10 out of bounds for length 10",
         frames=["org.stats.Histogram.add(Histogram.java:44)",
                 "org.stats.Histogram.addAll(Histogram.java:52)",
                 "org.stats.Main.main(Main.java:20)"],
         code="int[] buckets = new int[10];\nint index = (int) (value * buckets.length);\nbuckets[index]++;\nhistogram.addAll(samples);",
         title="ArrayIndexOutOfBoundsException in Histogram.add for value 1.0",
         prose=["A value of exactly 1.0 maps to index buckets.length, one past the last bucket.",
                "Clamp the computed index with Math.min(index, buckets.length - 1) before incrementing."]),
    dict(exc="java.util.ConcurrentModificationException", msg=None,
         frames=["java.util.ArrayList$Itr.checkForComodification(ArrayList.java:1013)",
                 "java.util.ArrayList$Itr.next(ArrayList.java:967)",
                 "net.todo.TaskList.purgeDone(TaskList.java:77)",
                 "net.todo.TaskList.main(TaskList.java:15)"],
         code="for (Task task : tasks) {\n    if (task.isDone()) {\n        tasks.remove(task);\n    }\n}",
         title="ConcurrentModificationException while removing finished tasks in a for-each loop",
         prose=["Removing from an ArrayList while iterating it with the enhanced for loop invalidates the iterator, and the next call to next detects it.",
                "Use tasks.removeIf(Task::isDone) or an explicit Iterator and call iterator.remove instead."]),
    dict(exc="java.lang.ClassCastException", msg="class java.lang.Integer cannot be cast to class java.lang.String",
         frames=["app.config.Settings.getString(Settings.java:33)",
                 "app.config.Settings.port(Settings.java:48)",
                 "app.Server.start(Server.java:25)"],
         code="Map<String, Object> values = yaml.load(input);\nString port = (String) values.get(\"port\");\nServer server = new Server(Integer.parseInt(port));",
         title="ClassCastException reading an Integer setting from a YAML map",
         prose=["The YAML parser already converts the port to an Integer, so the cast to String in getString fails.",
                "Read the value as Object and convert with String.valueOf, or declare a typed configuration class."]),
    dict(exc="java.lang.NumberFormatException", msg="For input string: \"12a\"",
         frames=["java.lang.NumberFormatException.forInputString(NumberFormatException.java:67)",
                 "java.lang.Integer.parseInt(Integer.java:668)",
                 "java.lang.Integer.parseInt(Integer.java:786)",
                 "edu.grades.CsvImporter.parseRow(CsvImporter.java:41)"],
         code="String[] cells = line.split(\",\");\nint score = Integer.parseInt(cells[2]);\nStudent student = new Student(cells[0], score);\nroster.add(student);",
         title="NumberFormatException parsing scores in CsvImporter.parseRow",
         prose=["One of the rows contains a stray letter in the score column, and Integer.parseInt rejects the whole cell.",
                "Trim the cell, validate it with a regular expression, and report the offending line instead of aborting the import."]),
    dict(exc="java.io.FileNotFoundException", msg="config/app.properties (No such file or directory)",
         frames=["java.io.FileInputStream.open0(Native Method)",
                 "java.io.FileInputStream.open(FileInputStream.java:219)",
                 "java.io.FileInputStream.<init>(FileInputStream.java:157)",
                 "io.loader.PropertyLoader.load(PropertyLoader.java:22)"],
         code="Properties props = new Properties();\nFileInputStream in = new FileInputStream(\"config/app.properties\");\nprops.load(in);",
         title="FileNotFoundException for config/app.properties when running the jar",
         prose=["The relative path is resolved against the working directory, which differs when the jar is started from another folder.",
                "Load the file from the classpath with getResourceAsStream or pass an absolute path through a system property."]),
    dict(exc="java.lang.IllegalStateException", msg="Cannot call sendRedirect() after the response has been committed",
         frames=["org.apache.catalina.connector.ResponseFacade.sendRedirect(ResponseFacade.java:488)",
                 "web.auth.LoginServlet.doPost(LoginServlet.java:64)",
                 "javax.servlet.http.HttpServlet.service(HttpServlet.java:681)"],
         code="response.getWriter().write(\"ok\");\nresponse.flushBuffer();\nresponse.sendRedirect(\"/home\");",
         title="IllegalStateException from sendRedirect in LoginServlet.doPost",
         prose=["Writing to the response and calling flushBuffer commits it, after which sendRedirect can no longer change the status line.",
                "Decide on the redirect before producing any output, and return right after calling sendRedirect."]),
    dict(exc="java.sql.SQLException", msg="No suitable driver found for jdbc:postgresql://localhost/shop",
         frames=["java.sql.DriverManager.getConnection(DriverManager.java:702)",
                 "java.sql.DriverManager.getConnection(DriverManager.java:228)",
                 "shop.db.Database.connect(Database.java:18)"],
         code="Connection conn = DriverManager.getConnection(url, user, password);\nPreparedStatement stmt = conn.prepareStatement(query);",
         title="SQLException: No suitable driver found for jdbc:postgresql",
         prose=["DriverManager found no registered driver that accepts the postgresql URL, which means the driver jar is missing from the runtime classpath.",
                "Add the PostgreSQL JDBC dependency with runtime scope and check the assembled jar really contains it."]),
    dict(exc="java.lang.OutOfMemoryError", msg="Java heap space",
         frames=["java.util.Arrays.copyOf(Arrays.java:3512)",
                 "java.lang.AbstractStringBuilder.ensureCapacityInternal(AbstractStringBuilder.java:228)",
                 "java.lang.StringBuilder.append(StringBuilder.java:179)",
                 "report.LogMerger.merge(LogMerger.java:90)"],
         code="StringBuilder all = new StringBuilder();\nfor (Path log : logs) {\n    all.append(Files.readString(log));\n}\nwriter.write(all.toString());",
         title="OutOfMemoryError: Java heap space in LogMerger.merge",
         prose=["LogMerger reads every log completely into one StringBuilder, so memory grows with the total size of all files.",
                "Stream each file into the writer with Files.lines or transferTo instead of building one huge string."]),
    dict(exc="java.lang.StackOverflowError", msg=None,
         frames=["tree.Node.depth(Node.java:27)",
                 "tree.Node.depth(Node.java:27)",
                 "tree.Node.depth(Node.java:27)",
                 "tree.Node.depth(Node.java:27)"],
         code="int depth() {\n    return 1 + Math.max(left.depth(), right.depth());\n}",
         title="StackOverflowError in recursive Node.depth",
         prose=["The recursion in depth never stops because a leaf points back to itself instead of holding null children.",
                "Add a base case for missing children and make sure setParent does not create cycles in the tree."]),
    dict(exc="java.lang.UnsupportedOperationException", msg=None,
         frames=["java.util.AbstractList.add(AbstractList.java:153)",
                 "java.util.AbstractList.add(AbstractList.java:111)",
                 "menu.MenuBuilder.addItem(MenuBuilder.java:36)"],
         code="List<String> items = Arrays.asList(\"open\", \"save\");\nitems.add(\"close\");\nmenu.setItems(items);",
         title="UnsupportedOperationException when adding to a list from Arrays.asList",
         prose=["Arrays.asList returns a fixed size view backed by the array, so add throws from AbstractList.",
                "Copy it into a new ArrayList before adding items, or build the list with List.of and a mutable copy."]),
    dict(exc="java.net.SocketTimeoutException", msg="Read timed out",
         frames=["java.net.SocketInputStream.socketRead0(Native Method)",
                 "java.net.SocketInputStream.read(SocketInputStream.java:168)",
                 "sun.net.www.http.HttpClient.parseHTTP(HttpClient.java:743)",
                 "weather.client.ForecastClient.fetch(ForecastClient.java:52)"],
         code="HttpURLConnection conn = (HttpURLConnection) url.openConnection();\nconn.setReadTimeout(500);\nInputStream body = conn.getInputStream();",
         title="SocketTimeoutException: Read timed out in ForecastClient.fetch",
         prose=["A read timeout of 500 milliseconds is shorter than the time the forecast service needs to produce a response.",
                "Raise setReadTimeout to a few seconds and retry with backoff when the remote service is slow."]),
    dict(exc="java.lang.ClassNotFoundException", msg="com.mysql.cj.jdbc.Driver",
         frames=["java.net.URLClassLoader.findClass(URLClassLoader.java:445)",
                 "java.lang.ClassLoader.loadClass(ClassLoader.java:587)",
                 "java.lang.Class.forName0(Native Method)",
                 "java.lang.Class.forName(Class.java:375)",
                 "inventory.Db.init(Db.java:14)"],
         code="Class.forName(\"com.mysql.cj.jdbc.Driver\");\nConnection c = DriverManager.getConnection(url);",
         title="ClassNotFoundException for com.mysql.cj.jdbc.Driver",
         prose=["Class.forName cannot load the MySQL driver class because the connector jar is not on the classpath at runtime.",
                "Add mysql-connector-j as a dependency and drop the Class.forName call, which modern drivers no longer need."]),
    dict(exc="java.lang.IllegalArgumentException", msg="Comparison method violates its general contract!",
         frames=["java.util.TimSort.mergeHi(TimSort.java:903)",
                 "java.util.TimSort.mergeAt(TimSort.java:520)",
                 "java.util.Collections.sort(Collections.java:145)",
                 "ranking.Leaderboard.order(Leaderboard.java:61)"],
         code="Collections.sort(players, new Comparator<Player>() {\n    public int compare(Player a, Player b) {\n        return a.score() > b.score() ? 1 : -1;\n    }\n});",
         title="Comparison method violates its general contract in Leaderboard.order",
         prose=["The comparator never returns zero for equal scores, so it is not symmetric and TimSort detects the inconsistency.",
                "Use Comparator.comparingInt(Player::score) which handles equality correctly."]),
    dict(exc="java.util.NoSuchElementException", msg="No value present",
         frames=["java.util.Optional.get(Optional.java:143)",
                 "accounts.UserRepository.byEmail(UserRepository.java:39)",
                 "accounts.LoginService.login(LoginService.java:27)"],
         code="Optional<User> user = users.stream().filter(u -> u.email().equals(email)).findFirst();\nreturn user.get();",
         title="NoSuchElementException: No value present from Optional.get in byEmail",
         prose=["findFirst returns an empty Optional when no user has that email, and calling get on it throws.",
                "Return the Optional to the caller or use orElseThrow with a meaningful UserNotFound exception."]),
    dict(exc="java.lang.InterruptedException", msg="sleep interrupted",
         frames=["java.lang.Thread.sleep(Native Method)",
                 "jobs.Poller.run(Poller.java:45)",
                 "java.lang.Thread.run(Thread.java:833)"],
         code="while (running) {\n    poll();\n    Thread.sleep(1000);\n}",
         title="InterruptedException: sleep interrupted in Poller.run during shutdown",
         prose=["The executor interrupts the worker thread on shutdown, which wakes Thread.sleep with this exception.",
                "Catch it, restore the flag with Thread.currentThread().interrupt(), and leave the polling loop."]),
    dict(exc="java.lang.ArithmeticException", msg="/ by zero",
         frames=["metrics.Average.of(Average.java:12)",
                 "metrics.Dashboard.refresh(Dashboard.java:70)",
                 "metrics.Dashboard.main(Dashboard.java:22)"],
         code="int total = sum(values);\nint mean = total / values.size();\ndashboard.show(mean);",
         title="ArithmeticException: / by zero in Average.of for an empty list",
         prose=["Integer division by values.size() fails when the list of samples is empty on the first refresh.",
                "Return an empty OptionalDouble or skip the refresh until the first sample arrives."]),
    dict(exc="java.nio.file.NoSuchFileException", msg="/tmp/uploads/report.pdf",
         frames=["sun.nio.fs.UnixException.translateToIOException(UnixException.java:92)",
                 "sun.nio.fs.UnixFileSystemProvider.newByteChannel(UnixFileSystemProvider.java:218)",
                 "java.nio.file.Files.newByteChannel(Files.java:380)",
                 "docs.UploadService.attach(UploadService.java:48)"],
         code="Path upload = Paths.get(\"/tmp/uploads\", name);\nbyte[] data = Files.readAllBytes(upload);\nstore.save(data);",
         title="NoSuchFileException reading an uploaded report in UploadService.attach",
         prose=["The temporary upload directory is cleaned by another job before attach reads the file.",
                "Move the upload to permanent storage right after receiving it instead of reading it later from /tmp."]),
    dict(exc="java.lang.NegativeArraySizeException", msg="-1",
         frames=["codec.FrameReader.readFrame(FrameReader.java:33)",
                 "codec.FrameReader.readAll(FrameReader.java:51)",
                 "codec.Main.main(Main.java:9)"],
         code="int length = in.readInt();\nbyte[] payload = new byte[length];\nin.readFully(payload);",
         title="NegativeArraySizeException in FrameReader.readFrame",
         prose=["The length prefix is read with the wrong byte order, so a large unsigned size turns into a negative int.",
                "Read the prefix with ByteBuffer.order(ByteOrder.LITTLE_ENDIAN) and validate it before allocating the array."]),
]

NAV = ["Home", "Questions", "Tags", "Users", "Companies", "Jobs", "Unanswered", "Ask Question", "Blog", "Help"]
FOOTER = ["About", "Press", "Work here", "Legal", "Privacy Policy", "Terms of Service", "Contact Us", "Cookie Settings"]
ADS = ["Deploy your app in seconds with our managed cloud platform",
       "Hiring senior engineers: remote friendly, great benefits",
       "Learn a new language in 30 days with daily lessons",
       "Cheap flights to sunny destinations all year round",
       "Upgrade your laptop today with free next day delivery"]
ESSAYS = [
    ("A short history of build tools",
     "Before dependency managers became common, most teams copied jar files into a lib folder and committed them "
     "alongside the source. The approach worked for small projects, but it made upgrades painful and it was easy to end "
     "up with two versions of the same library on the classpath. Declarative build files changed that by describing "
     "what a project needs instead of how to fetch it. Repositories of published artifacts grew quickly, and with them "
     "came conventions for versioning, transitive resolution, and reproducible builds. Later generations of tools "
     "focused on speed, incremental compilation, and caching across machines, while keeping the same basic promise: "
     "describe the project once and let the tool work out the rest. Today the choice of build tool is as much about "
     "team habits and ecosystem as it is about features, and most of them can read each other's metadata well enough "
     "to coexist in large organisations that have grown through acquisitions and mergers."),
    ("Why code review matters",
     "Code review is often presented as a way to catch defects, but its larger benefit is spreading knowledge across a "
     "team. When several people have read a change, the team no longer depends on a single author to explain it, fix it, "
     "or extend it. Reviews also create a written record of design decisions that would otherwise live only in hallway "
     "conversations. The best reviews are small and frequent, focus on intent before style, and leave automated tools to "
     "handle formatting. Reviewers should ask questions rather than issue commands, and authors should treat comments as "
     "an opportunity to clarify rather than as criticism. Over time a healthy review culture makes a codebase more "
     "consistent and its maintainers more confident about touching unfamiliar parts of the system."),
    ("Notes on remote collaboration",
     "Distributed teams rely on writing far more than teams that share an office. Decisions, plans, and status updates "
     "all need a durable home where people in other time zones can find them. That shifts effort from meetings to "
     "documents, and it rewards clear and concise prose. Synchronous time becomes precious and is best spent on "
     "discussions that genuinely need quick back and forth, such as planning sessions or resolving disagreements. Many "
     "teams settle on a small set of overlapping hours for these conversations and leave the rest of the day for "
     "focused work. Tools matter less than habits: a shared calendar, a searchable wiki, and a culture of writing things "
     "down will carry a team much further than any particular chat application or video service."),
    ("Choosing a database for a side project",
     "For most side projects the database choice matters much less than people expect. A single relational database "
     "handles far more traffic than a hobby application will ever see, and it offers transactions, constraints, and a "
     "query language that every developer already knows. Document stores can be convenient when the shape of the data is "
     "still changing, but they push consistency checks into application code. Embedded databases remove the operational "
     "burden entirely and are a good fit for tools that run on a single machine. Whatever you pick, keep backups, write "
     "down how to restore them, and test the restore at least once before you need it in a hurry."),
]


def trace_text(s):
    head = s["exc"] + (": " + s["msg"] if s["msg"] else "")
    return head + "\n" + "\n".join("\tat " + f for f in s["frames"]) + "\n"


def links(items, rng, prefix="/"):
    return " ".join('<a href="%s%d">%s</a>' % (prefix, rng.randrange(1000), html.escape(t)) for t in items)


def related_titles(s, rng):
    simple = s["exc"].rsplit(".", 1)[-1]
    method = s["frames"][0].split("(")[0].rsplit(".", 1)[-1]
    pool = ["How to fix %s in Java?" % simple,
            "%s thrown by %s" % (simple, method),
            "Why do I get %s when calling %s?" % (simple, method),
            "%s after upgrading to Java 17" % s["exc"],
            "Debugging %s in production logs" % simple,
            "Spring Boot fails on startup",
            "Maven build hangs on tests"]
    rng.shuffle(pool)
    return pool[:5]


def relevant_section(s, rng, flavor):
    """Returns (html, gold_text) for the planted section."""
    question, answer = s["prose"]
    trace = trace_text(s)
    parts = []
    gold = []
    if flavor == "so":
        # Question header and post body share one container, as on Q&A sites.
        parts.append('<div id="question-header"><h1 itemprop="name"><a href="/q/%d">%s</a></h1></div>'
                     % (rng.randrange(10 ** 6), html.escape(s["title"])))
        gold.append(s["title"])
        parts.append('<div class="post-text" itemprop="description">')
        parts.append("<p>%s</p>" % html.escape(question))
        gold.append(question)
        parts.append('<pre class="lang-java prettyprint"><code>%s</code></pre>' % html.escape(trace))
        gold.append(trace)
        parts.append("<p>%s</p>" % html.escape(answer))
        gold.append(answer)
        parts.append('<pre class="lang-java prettyprint"><code>%s</code></pre>' % html.escape(s["code"]))
        gold.append(s["code"])
        parts.append("</div>")
        return '<div id="content">%s</div>' % "".join(parts), "\n".join(gold)
    parts.append('<h2>%s</h2>' % html.escape(s["title"]))
    gold.append(s["title"])
    parts.append("<p>%s</p>" % html.escape(question))
    gold.append(question)
    parts.append("<blockquote><pre>%s</pre></blockquote>" % html.escape(trace))
    gold.append(trace)
    parts.append("<p>%s</p>" % html.escape(answer))
    gold.append(answer)
    parts.append("<pre><code>%s</code></pre>" % html.escape(s["code"]))
    gold.append(s["code"])
    return '<div class="entry-content">%s</div>' % "".join(parts), "\n".join(gold)


def page(s, rng, flavor):
    essay_title, essay = ESSAYS[rng.randrange(len(ESSAYS))]
    section, gold = relevant_section(s, rng, flavor)
    blocks = {
        "nav": '<div id="nav"><ul>%s</ul></div>' % "".join(
            '<li><a href="/%s">%s</a></li>' % (t.lower().replace(" ", "-"), t) for t in NAV),
        "main": '<div id="main">%s</div>' % section,
        "related": '<div id="related"><h4>Related</h4><ul>%s</ul></div>' % "".join(
            '<li><a href="/q/%d">%s</a></li>' % (rng.randrange(10 ** 6), html.escape(t)) for t in related_titles(s, rng)),
        "essay": '<div id="featured"><h3>%s</h3><p>%s</p></div>' % (essay_title, essay),
        "ads": '<div id="ads">%s</div>' % links(rng.sample(ADS, 3), rng, "/ad/"),
        "footer": '<div id="footer">%s<p>site design / logo &copy; 2024</p></div>' % links(FOOTER, rng),
    }
    order = ["nav", "main", "related", "essay", "ads", "footer"]
    if rng.random() < 0.5:
        order = ["nav", "essay", "main", "ads", "related", "footer"]
    if rng.random() < 0.4:
        order.remove("essay")
    head = ('<head><meta charset="utf-8"><title>%s</title><script>window.dataLayer = [];</script>'
            '<style>body { font-family: sans-serif; }</style></head>') % html.escape(s["title"])
    body = "\n".join(blocks[k] for k in order)
    site = "Stack Exchange" if flavor == "so" else rng.choice(["DevNotes", "Code Journal", "The Java Corner"])
    return "<!DOCTYPE html>\n<html>%s\n<body>\n<h1>%s</h1>\n%s\n</body></html>\n" % (head, site, body), gold


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/corpus")
    if out.exists():
        shutil.rmtree(out)
    rng = random.Random(20240611)
    for i, s in enumerate(SCENARIOS):
        flavor = "so" if i % 2 == 0 else "non-so"
        html_text, gold = page(s, rng, flavor)
        case = out / ("case%02d" % (i + 1))
        case.mkdir(parents=True)
        (case / "page.html").write_text(html_text, encoding="utf-8")
        (case / "context.json").write_text(json.dumps({"trace": trace_text(s), "code": s["code"]}, indent=2) + "\n",
                                           encoding="utf-8")
        (case / "gold.txt").write_text(gold.strip() + "\n", encoding="utf-8")
        (case / "meta.json").write_text(json.dumps({"group": flavor}) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
